//! Anomaly integrals `f_Γ` over the variety `S_{n,t}`.
//!
//! The integrand only depends on the configuration `(aη, ω)` up to translation
//! along `a` and dilation, so the fibre sphere over each `a` is replaced by the
//! affine slice `η₁ = 0, η₂ = σ ∈ {±1}`, which meets every orbit once. On the
//! slice the orientation of the fibre (frame `N, −y, …` positive, `N` the
//! normal of the translation constraint and `y` the radial direction) becomes
//! the constant `−σ`.

use std::f64::consts::PI;

use rand::Rng;

use super::sampler::{anchor_lists, random_direction, PointLaw};
use super::{edge_jacobian_det, run_chunks, GraphPlan, IntegralEstimate, McOptions, Moments};
use crate::error::{Error, Result};
use crate::graph::WilsonGraph;
use crate::knot::V3;

/// A point `(a, η, ω)` of `S_{n,t}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnomalyPoint {
    pub a: V3,
    pub eta: Vec<f64>,
    pub omega: Vec<V3>,
}

impl AnomalyPoint {
    /// Moves an arbitrary configuration onto the variety by removing the
    /// translation along `a` and normalizing.
    pub fn normalized(a: V3, eta: Vec<f64>, omega: Vec<V3>) -> Result<Self> {
        let a = super::unit(a)?;
        let m = (eta.len() + omega.len()) as f64;
        let shift = (eta.iter().sum::<f64>() + omega.iter().map(|w| w.dot(&a)).sum::<f64>()) / m;
        let eta: Vec<f64> = eta.iter().map(|e| e - shift).collect();
        let omega: Vec<V3> = omega.iter().map(|w| w - a * shift).collect();
        let r = (eta.iter().map(|e| e * e).sum::<f64>() + omega.iter().map(|w| w.norm_squared()).sum::<f64>()).sqrt();
        if !(r > 0.0) {
            return Err(Error::Input("configuration collapses to a point".into()));
        }
        Ok(AnomalyPoint { a, eta: eta.iter().map(|e| e / r).collect(), omega: omega.iter().map(|w| w / r).collect() })
    }

    /// Residuals of the sphere and hyperplane constraints.
    pub fn residuals(&self) -> (f64, f64) {
        let sq = self.eta.iter().map(|e| e * e).sum::<f64>() + self.omega.iter().map(|w| w.norm_squared()).sum::<f64>();
        let lin = self.eta.iter().sum::<f64>() + self.omega.iter().map(|w| w.dot(&self.a)).sum::<f64>();
        (sq - 1.0, lin)
    }

    pub fn cyclically_ordered(&self) -> bool {
        cyclic(&self.eta)
    }
}

fn cyclic(eta: &[f64]) -> bool {
    let n = eta.len();
    n < 2 || (0..n).filter(|&i| eta[(i + 1) % n] < eta[i]).count() == 1
}

fn tangent_frame(a: V3) -> (V3, V3) {
    let helper = if a.x.abs() < 0.9 { V3::x() } else { V3::y() };
    let e1 = a.cross(&helper).normalize();
    (e1, a.cross(&e1))
}

/// `f_Γ` with default settings.
pub fn anomaly(g: &WilsonGraph, opts: &McOptions) -> Result<IntegralEstimate> {
    anomaly_with(g, opts, &PointLaw { global: 1.0, local: 0.5 })
}

pub(crate) fn anomaly_with(g: &WilsonGraph, opts: &McOptions, law: &PointLaw) -> Result<IntegralEstimate> {
    if opts.samples == 0 {
        return Err(Error::Input("sample budget must be positive".into()));
    }
    let plan = GraphPlan::new(g);
    if plan.vanishes() || !g.is_primitive() {
        return Ok(IntegralEstimate::exact_zero(opts.seed));
    }
    let n = plan.n();
    let t = plan.t();
    if n < 2 {
        return Err(Error::Cap("anomaly integrals need at least two external vertices".into()));
    }
    let anchors = anchor_lists(&plan);
    let dim = n + 3 * t;
    let m = run_chunks(opts.samples, opts.chunk, opts.seed, plan.stream ^ 0xa5a5, |rng, size| {
        let mut m = Moments::default();
        for _ in 0..size {
            let a = random_direction(rng);
            let sigma = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let mut weight = 4.0 * PI * 2.0;
            let mut eta = vec![0.0, sigma];
            for _ in 2..n {
                let e = (PI * (rng.random::<f64>() - 0.5)).tan();
                weight *= PI * (1.0 + e * e);
                eta.push(e);
            }
            let mut pos: Vec<V3> = eta.iter().map(|&e| a * e).collect();
            for list in anchors.iter() {
                let at: Vec<V3> = list.iter().map(|&v| pos[v]).collect();
                let x = law.draw(rng, V3::zeros(), &at);
                weight /= law.density(x, V3::zeros(), &at);
                pos.push(x);
            }
            let inside = plan.edges().iter().any(|&(p, q)| (pos[p] - pos[q]).norm() < opts.core);
            let w = if inside || !cyclic(&eta) {
                0.0
            } else {
                let (e1, e2) = tangent_frame(a);
                let det = edge_jacobian_det(plan.edges(), &pos, dim, |v, c| match c {
                    0 | 1 => (v < n).then(|| if c == 0 { e1 * eta[v] } else { e2 * eta[v] }),
                    c if c < n => (v == c).then_some(a),
                    c => (v >= n && v - n == (c - n) / 3).then(|| {
                        let mut e = V3::zeros();
                        e[(c - n) % 3] = 1.0;
                        e
                    }),
                })?;
                det * -sigma * plan.orientation_sign() * weight
            };
            if !w.is_finite() {
                return Err(Error::Numeric(format!("non-finite anomaly sample ({w})")));
            }
            m.push(w);
        }
        Ok(m)
    })?;
    Ok(m.estimate(opts.seed))
}
