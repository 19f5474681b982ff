use super::sampler::PointLaw;
use super::*;
use crate::knot::{Curve, Fourier, FourierTerm, Framing};
use rand::SeedableRng;
use std::sync::Arc;

fn trefoil() -> KnotEmbedding {
    KnotEmbedding::preset("trefoil").unwrap()
}

fn circle() -> KnotEmbedding {
    KnotEmbedding::circle(1.0).unwrap()
}

#[test]
fn unit_direction() {
    assert_eq!(unit(V3::new(0.0, 0.0, 2.0)).unwrap(), V3::new(0.0, 0.0, 1.0));
    assert!(unit(V3::zeros()).is_err());
}

#[test]
fn gauss_form_has_unit_mass() {
    // x(θ,ϕ) on the unit sphere, 200×400 midpoint grid
    let (nt, np) = (200, 400);
    let mut total = 0.0;
    for i in 0..nt {
        let th = PI * (i as f64 + 0.5) / nt as f64;
        for j in 0..np {
            let ph = 2.0 * PI * (j as f64 + 0.5) / np as f64;
            let x = V3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
            let dth = V3::new(th.cos() * ph.cos(), th.cos() * ph.sin(), -th.sin());
            let dph = V3::new(-th.sin() * ph.sin(), th.sin() * ph.cos(), 0.0);
            total += gauss_form(x, dth, dph).unwrap();
        }
    }
    total *= PI / nt as f64 * 2.0 * PI / np as f64;
    assert!((total - 1.0).abs() < 1e-4, "{total}");
}

#[test]
fn antipodal_reverses_gauss_form() {
    let x = V3::new(0.3, -1.2, 0.7);
    let v = V3::new(1.0, 0.5, 0.0);
    let w = V3::new(-0.2, 0.1, 2.0);
    assert_eq!(gauss_form(-x, -v, -w).unwrap(), -gauss_form(x, v, w).unwrap());
}

#[test]
fn planar_theta_vanishes_pointwise() {
    let k = circle();
    let g = WilsonGraph::theta();
    for i in 0..20 {
        let p = ConfigPoint::new(vec![0.05 * i as f64, 0.05 * i as f64 + 0.37], vec![]).unwrap();
        assert_eq!(integrand(&g, &k, &p).unwrap(), 0.0);
    }
}

#[test]
fn theta_density_is_the_self_linking_kernel() {
    let k = trefoil();
    let g = WilsonGraph::theta();
    let (s1, s2) = (0.13, 0.58);
    let p = ConfigPoint::new(vec![s1, s2], vec![]).unwrap();
    let d = k.point(s2) - k.point(s1);
    let want = k.d1(s1).cross(&k.d1(s2)).dot(&d) / (4.0 * PI * d.norm().powi(3));
    let got = integrand(&g, &k, &p).unwrap();
    assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{got} vs {want}");
}

#[test]
fn self_loop_graph_vanishes() {
    let g = WilsonGraph::from_edges(1, 1, vec![(0, 1), (1, 1)]).unwrap();
    let p = ConfigPoint::new(vec![0.2], vec![V3::new(0.1, 2.0, 0.3)]).unwrap();
    assert_eq!(integrand(&g, &trefoil(), &p).unwrap(), 0.0);
    let est = integrate(&g, &trefoil(), &McOptions::new(10, 1)).unwrap();
    assert_eq!(est.method, Method::ExactZero);
}

#[test]
fn reversed_orientation_negates_density() {
    let k = trefoil();
    let g = WilsonGraph::y_graph();
    let p = ConfigPoint::new(vec![0.1, 0.4, 0.8], vec![V3::new(0.3, 0.2, 0.4)]).unwrap();
    let a = integrand(&g, &k, &p).unwrap();
    let b = integrand(&g.negated(), &k, &p).unwrap();
    assert_ne!(a, 0.0);
    assert_eq!(a, -b);
}

#[test]
fn mirror_parity_of_density() {
    let k = trefoil();
    let m = k.mirror();
    for g in [WilsonGraph::theta(), WilsonGraph::y_graph()] {
        let deg = g.degree().unwrap() as i32;
        let p = if g.n_int() == 0 {
            ConfigPoint::new(vec![0.1, 0.45], vec![]).unwrap()
        } else {
            ConfigPoint::new(vec![0.1, 0.4, 0.8], vec![V3::new(0.3, 0.2, 0.4)]).unwrap()
        };
        let a = integrand(&g, &k, &p).unwrap();
        let b = integrand(&g, &m, &p.mirrored()).unwrap();
        assert!((b - (-1f64).powi(deg) * a).abs() < 1e-12 * a.abs().max(1e-12));
    }
}

#[test]
fn degenerate_point_is_an_error() {
    let k = trefoil();
    let p = ConfigPoint::new(vec![0.1, 0.4, 0.8], vec![k.point(0.4)]).unwrap();
    assert!(integrand(&WilsonGraph::y_graph(), &k, &p).is_err());
}

#[test]
fn point_law_is_normalized() {
    let law = PointLaw { global: 1.5, local: 0.4 };
    let anchors = [V3::new(1.0, 0.0, 0.0), V3::new(-0.5, 0.3, 0.2)];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // E_q[f/q] = ∫f for a unit Gaussian f
    let mut m = Moments::default();
    for _ in 0..200_000 {
        let x = law.draw(&mut rng, V3::zeros(), &anchors);
        let f = (-(x.norm_squared()) / 2.0).exp() / (2.0 * PI).powf(1.5);
        m.push(f / law.density(x, V3::zeros(), &anchors));
    }
    let e = m.estimate(0);
    assert!((e.value - 1.0).abs() < 4.0 * e.std_error, "{} ± {}", e.value, e.std_error);
}

#[test]
fn planar_circle_integrals_vanish() {
    let e = integrate(&WilsonGraph::theta(), &circle(), &McOptions::new(20_000, 5)).unwrap();
    assert_eq!(e.value, 0.0);
    assert!(self_linking(&circle()).unwrap().value.abs() < 1e-12);
}

#[test]
fn monte_carlo_theta_matches_quadrature() {
    let k = trefoil();
    let q = self_linking(&k).unwrap().value;
    let e = integrate(&WilsonGraph::theta(), &k, &McOptions::new(400_000, 11)).unwrap();
    assert!((e.value - q).abs() < 4.0 * e.std_error, "{} ± {} vs {q}", e.value, e.std_error);
    assert!(e.std_error < 0.05);
}

#[test]
fn estimates_are_deterministic_and_thread_independent() {
    let k = trefoil();
    let g = WilsonGraph::y_graph();
    let opts = McOptions::new(20_000, 42);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| integrate(&g, &k, &opts).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a, b);
    let c = integrate(&g.negated(), &k, &opts).unwrap();
    assert_eq!(c.value, -a.value);
    assert_eq!(c.std_error, a.std_error);
}

#[test]
fn zero_budget_rejected() {
    assert!(integrate(&WilsonGraph::theta(), &trefoil(), &McOptions::new(0, 1)).is_err());
    assert!(anomaly(&WilsonGraph::theta(), &McOptions::new(0, 1)).is_err());
}

/// Independent oracle: Gauss–Legendre panels in the offset, trapezoid in `s₁`.
fn self_linking_oracle(k: &KnotEmbedding, m: usize, panels: usize) -> f64 {
    let gl = [
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (-0.538_469_310_105_683, 0.478_628_670_499_366_5),
        (0.0, 0.568_888_888_888_888_9),
        (0.538_469_310_105_683, 0.478_628_670_499_366_5),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let mut total = 0.0;
    for i in 0..m {
        let s1 = i as f64 / m as f64;
        let (p1, v1) = (k.point(s1), k.d1(s1));
        for pnl in 0..panels {
            let lo = pnl as f64 / panels as f64;
            let h = 1.0 / panels as f64;
            for &(x, w) in &gl {
                let s2 = s1 + lo + h * (x + 1.0) / 2.0;
                let d = k.point(s2) - p1;
                total += w * h / 2.0 * v1.cross(&k.d1(s2)).dot(&d) / d.norm().powi(3);
            }
        }
    }
    total / m as f64 / (4.0 * PI)
}

#[test]
fn self_linking_matches_oracle() {
    for k in [trefoil(), KnotEmbedding::preset("cinquefoil").unwrap()] {
        let q = self_linking(&k).unwrap();
        let o = self_linking_oracle(&k, 600, 300);
        assert!((q.value - o).abs() < 1e-6 * o.abs().max(1.0), "{}: {} vs {o}", k.name, q.value);
    }
}

fn push_off_linking(k: &KnotEmbedding, eps: f64) -> f64 {
    let h = 1e-6;
    let off = |s: f64| {
        let p = k.point(s) + k.frame(s) * eps;
        let v = k.d1(s) + (k.frame(s + h) - k.frame(s - h)) * (eps / (2.0 * h));
        (p, v)
    };
    linking_number(|s| (k.point(s), k.d1(s)), off, 4000).unwrap()
}

#[test]
fn writhe_plus_torsion_is_the_push_off_linking_number() {
    for (name, f) in [("trefoil", Framing::Default), ("trefoil", Framing::Twist { k: 2 }), ("mirror-trefoil", Framing::Twist { k: -1 })] {
        let k = KnotEmbedding::preset(name).unwrap().with_framing(f);
        let total = self_linking(&k).unwrap().value + torsion(&k).unwrap();
        let lk = push_off_linking(&k, 0.05);
        assert!((total - total.round()).abs() < 1e-6, "{name}: {total}");
        assert!((lk - total).abs() < 1e-3, "{name}: lk {lk} vs {total}");
    }
}

#[test]
fn torsion_properties() {
    let c = circle().with_framing(Framing::Default);
    assert!(torsion(&c).unwrap().abs() < 1e-9);
    let k = trefoil();
    let base = torsion(&k.clone().with_framing(Framing::Default)).unwrap();
    for tw in [-2, 1, 3] {
        let v = torsion(&k.clone().with_framing(Framing::Twist { k: tw })).unwrap();
        assert!((v - base - tw as f64).abs() < 1e-6, "{tw}: {}", v - base);
    }
}

#[test]
fn linking_framing_resolution() {
    let k = trefoil();
    let f = resolve_framing(&k, FramingSpec::Linking { lk: 0 }).unwrap();
    let k0 = k.clone().with_framing(f);
    let total = self_linking(&k0).unwrap().value + torsion(&k0).unwrap();
    assert!(total.abs() < 1e-6, "{total}");
}

use crate::knot::FramingSpec;

#[test]
fn anomaly_of_theta_is_two() {
    let e = anomaly(&WilsonGraph::theta(), &McOptions::new(1000, 9)).unwrap();
    assert!((e.value - 2.0).abs() < 1e-12, "{}", e.value);
}

#[test]
fn anomaly_of_non_primitive_graph_is_exactly_zero() {
    let x = WilsonGraph::chord_diagram(&[(0, 1), (2, 3)]).unwrap();
    let e = anomaly(&x, &McOptions::new(10, 1)).unwrap();
    assert_eq!(e.value, 0.0);
    assert_eq!(e.method, Method::ExactZero);
}

#[test]
fn anomaly_point_normalization() {
    let p = AnomalyPoint::normalized(V3::new(0.0, 0.0, 3.0), vec![0.0, 1.0, 5.0], vec![V3::new(1.0, 2.0, 3.0)]).unwrap();
    let (sq, lin) = p.residuals();
    assert!(sq.abs() < 1e-12 && lin.abs() < 1e-12);
    assert!(p.cyclically_ordered());
}

#[test]
fn straight_segment_oracle_for_fourier_curves() {
    // a curve built from explicit terms evaluates like the closed form
    let f = Fourier::new(vec![FourierTerm { k: 2, cos: [1.0, 0.0, 0.0], sin: [0.0, 1.0, 0.0] }]);
    let p = f.point(0.125);
    assert!((p - V3::new(0.0, 1.0, 0.0)).norm() < 1e-12);
    let _k = KnotEmbedding::new(Arc::new(Fourier::circle(2.0)), "c2").unwrap();
}
