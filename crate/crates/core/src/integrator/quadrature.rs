//! Deterministic quadrature for the self-linking integral, total torsion and
//! linking numbers of disjoint closed curves.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use super::{IntegralEstimate, Method};
use crate::error::{Error, Result};
use crate::knot::{Framing, FramingSpec, KnotEmbedding, V3};

pub const DEFAULT_RESOLUTION: usize = 2048;

fn kernel(p1: V3, v1: V3, p2: V3, v2: V3) -> f64 {
    let d = p2 - p1;
    let r = d.norm();
    v1.cross(&v2).dot(&d) / (r * r * r)
}

/// Midpoint rule on `s₂ = s₁ + d`, `d ∈ (0,1)`, with `m` nodes per axis.
fn self_linking_midpoint(k: &KnotEmbedding, m: usize) -> f64 {
    let h = 1.0 / m as f64;
    let node = |u: f64| (k.point(u), k.d1(u));
    let full: Vec<(V3, V3)> = (0..m).map(|i| node(i as f64 * h)).collect();
    let half: Vec<(V3, V3)> = (0..m).map(|i| node((i as f64 + 0.5) * h)).collect();
    let total: f64 = (0..m)
        .into_par_iter()
        .map(|i| {
            let (p1, v1) = full[i];
            let mut acc = 0.0;
            for j in 0..m {
                let (p2, v2) = half[(i + j) % m];
                acc += kernel(p1, v1, p2, v2);
            }
            acc
        })
        .sum();
    total * h * h / (4.0 * PI)
}

/// `I(Θ)(φ) = (1/4π) ∬ (φ̇(s₁) × φ̇(s₂)) · (φ(s₂) − φ(s₁)) / |φ(s₂) − φ(s₁)|³`.
pub fn self_linking(k: &KnotEmbedding) -> Result<IntegralEstimate> {
    self_linking_with(k, DEFAULT_RESOLUTION)
}

/// Richardson extrapolation of the midpoint rule at `m` and `2m` nodes per axis.
/// `std_error` holds the extrapolation correction, a conservative error bound.
pub fn self_linking_with(k: &KnotEmbedding, m: usize) -> Result<IntegralEstimate> {
    if m < 4 {
        return Err(Error::Input("quadrature resolution too small".into()));
    }
    let coarse = self_linking_midpoint(k, m);
    let fine = self_linking_midpoint(k, 2 * m);
    let value = (4.0 * fine - coarse) / 3.0;
    let err = (value - fine).abs();
    if !value.is_finite() {
        return Err(Error::Numeric("self-linking quadrature produced a non-finite value".into()));
    }
    if err > 1e-3 * (1.0 + value.abs()) {
        return Err(Error::Numeric(format!(
            "self-linking quadrature not converged at {m} nodes (correction {err:.3e}); raise the resolution"
        )));
    }
    Ok(IntegralEstimate { value, std_error: err, samples: (m * m + 4 * m * m) as u64, seed: 0, method: Method::Quadrature })
}

fn unit_normal_part(t: V3, nu: V3) -> Result<V3> {
    let p = nu - t * nu.dot(&t);
    let r = p.norm();
    if !(r > 1e-9 * nu.norm().max(1e-300)) {
        return Err(Error::Numeric("framing vector parallel to the tangent".into()));
    }
    Ok(p / r)
}

/// `τ(φ,ν) = (1/2π) ∮ (t, ν̂', ν̂) ds` with `ν̂` the unit normal part of the framing,
/// oriented so that `I(Θ) + τ` is the linking number of `φ` with `φ + εν`.
pub fn torsion(k: &KnotEmbedding) -> Result<f64> {
    torsion_with(k, DEFAULT_RESOLUTION)
}

/// Twist of `ν̂` against discrete parallel transport at `m` nodes: the sum of
/// the signed angles between `ν̂(sᵢ₊₁)` and `ν̂(sᵢ)` carried along the minimal
/// rotation `tᵢ → tᵢ₊₁`, divided by `2π`. Second order in `1/m`.
fn transport_twist(k: &KnotEmbedding, m: usize) -> Result<f64> {
    let nodes: Vec<(V3, V3)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let s = i as f64 / m as f64;
            let t = k.tangent(s);
            Ok((t, unit_normal_part(t, k.frame(s))?))
        })
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for i in 0..m {
        let (t0, n0) = nodes[i];
        let (t1, n1) = nodes[(i + 1) % m];
        // Rodrigues rotation taking t0 to t1, applied to n0
        let axis = t0.cross(&t1);
        let c = t0.dot(&t1);
        if c <= -0.5 {
            return Err(Error::Numeric("tangent turns too fast for the torsion quadrature".into()));
        }
        let u = n0 * c + axis.cross(&n0) + axis * (axis.dot(&n0) / (1.0 + c));
        total += t1.dot(&u.cross(&n1)).atan2(u.dot(&n1));
    }
    Ok(-total / TAU)
}

/// Total torsion starting from `m` nodes, doubled until the Richardson
/// estimates of successive levels agree to `1e-10`.
pub fn torsion_with(k: &KnotEmbedding, m: usize) -> Result<f64> {
    const MAX_NODES: usize = 1 << 22;
    let mut m = m.max(64);
    let mut coarse = transport_twist(k, m)?;
    let mut last: Option<f64> = None;
    while 2 * m <= MAX_NODES {
        m *= 2;
        let fine = transport_twist(k, m)?;
        let est = (4.0 * fine - coarse) / 3.0;
        if let Some(prev) = last {
            if (est - prev).abs() < 1e-10 {
                return Ok(est);
            }
        }
        last = Some(est);
        coarse = fine;
    }
    let est = last.expect("at least one level");
    if (est - coarse).abs() > 1e-6 {
        return Err(Error::Numeric(format!("torsion quadrature not converged at {m} nodes")));
    }
    Ok(est)
}

/// Gauss linking integral of two disjoint closed curves given as
/// `s ↦ (point, velocity)`, with the same kernel as the self-linking integral.
pub fn linking_number<A, B>(a: A, b: B, m: usize) -> Result<f64>
where
    A: Fn(f64) -> (V3, V3) + Sync,
    B: Fn(f64) -> (V3, V3) + Sync,
{
    let pa: Vec<(V3, V3)> = (0..m).map(|i| a(i as f64 / m as f64)).collect();
    let pb: Vec<(V3, V3)> = (0..m).map(|i| b((i as f64 + 0.5) / m as f64)).collect();
    let total: f64 = pa
        .par_iter()
        .map(|&(p1, v1)| pb.iter().map(|&(p2, v2)| kernel(p1, v1, p2, v2)).sum::<f64>())
        .sum();
    let v = total / (m * m) as f64 / (4.0 * PI);
    if !v.is_finite() {
        return Err(Error::Numeric("curves intersect".into()));
    }
    Ok(v)
}

/// Turns a requested framing into a twist of the default framing.
pub fn resolve_framing(k: &KnotEmbedding, spec: FramingSpec) -> Result<Framing> {
    match spec {
        FramingSpec::Default => Ok(Framing::Default),
        FramingSpec::Twist { k } => Ok(Framing::Twist { k }),
        FramingSpec::Linking { lk } => {
            let mut base = k.clone();
            base.framing = Some(Framing::Default);
            let total = self_linking(&base)?.value + torsion(&base)?;
            let r = total.round();
            if (total - r).abs() > 1e-2 {
                return Err(Error::Numeric(format!("default framing linking number {total} is not near an integer")));
            }
            Ok(Framing::Twist { k: lk - r as i64 })
        }
    }
}
