//! Finite differences `Σ_ε (∏ εᵢ) Ẑ_N(K_ε)` over the resolutions of a singular knot.
//!
//! Each resolution keeps its own default framing; since `Ẑ` is a framed
//! invariant this is the difference of framed invariants of the resolved
//! knots. Writing `exp(α τ_ε) = Σ_m τ_ε^m α^m/m!`, every coordinate of the
//! difference is a linear combination of the `I(Γ)(K_ε)`, estimated jointly
//! with common random numbers so that only the local changes carry variance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{graph_terms, single, AnomalyTable, EngineOptions, Provenance};
use crate::algebra::{Algebra, Coeff, DiagramSeries};
use crate::error::{Error, Result};
use crate::graph::WilsonGraph;
use crate::integrator::{self, integrate_family_rows, GraphPlan, HotPair};
use crate::knot::{Framing, KnotEmbedding, SingularKnot};

/// `Γ(K)`.
pub fn chord_diagram_of(sk: &SingularKnot) -> WilsonGraph {
    sk.chord_diagram()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub signs: Vec<i8>,
    pub self_linking: f64,
    pub torsion: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferenceTerm {
    pub graph: String,
    pub degree: usize,
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub samples: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VassilievReport {
    pub order: usize,
    pub double_points: usize,
    pub chord_diagram: String,
    /// `D(Γ(K))` in the degree-`order` basis (empty unless `order` equals the number of double points).
    pub chord_coords: Vec<f64>,
    pub basis: Vec<String>,
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    pub members: Vec<MemberReport>,
    pub terms: Vec<DifferenceTerm>,
    pub amplitude: f64,
    pub provenance: Provenance,
}

impl VassilievReport {
    /// `v = c·u + r` with `u = D(Γ(K))` and `r ⟂ u`; returns `c`, `σ_c`, `r` and `σ_r`.
    pub fn proportionality(&self) -> Option<(f64, f64, Vec<f64>, Vec<f64>)> {
        let u = &self.chord_coords;
        let uu: f64 = u.iter().map(|x| x * x).sum();
        if u.len() != self.values.len() || uu == 0.0 {
            return None;
        }
        let n = u.len();
        let c = u.iter().zip(&self.values).map(|(a, b)| a * b).sum::<f64>() / uu;
        let quad = |w: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += w[i] * self.covariance[i][j] * w[j];
                }
            }
            s.max(0.0)
        };
        let sc = (quad(&u.iter().map(|x| x / uu).collect::<Vec<_>>())).sqrt();
        let mut r = Vec::with_capacity(n);
        let mut sr = Vec::with_capacity(n);
        for i in 0..n {
            r.push(self.values[i] - c * u[i]);
            // row i of I − u uᵀ/|u|²
            let w: Vec<f64> = (0..n).map(|j| (if i == j { 1.0 } else { 0.0 }) - u[i] * u[j] / uu).collect();
            sr.push(quad(&w).sqrt());
        }
        Some((c, sc, r, sr))
    }
}

/// Quadrature resolution adequate for strands `δ·|d|` apart.
fn family_resolution(opts: &EngineOptions, amplitude: f64) -> usize {
    let m = (integrator::DEFAULT_RESOLUTION as f64 / amplitude.sqrt()).ceil() as usize;
    opts.resolution.max(m.div_ceil(64) * 64)
}

fn add_outer(cov: &mut [Vec<f64>], v: &[f64]) {
    for i in 0..v.len() {
        for j in 0..v.len() {
            cov[i][j] += v[i] * v[j];
        }
    }
}

/// `Σ_ε (∏ εᵢ) Ẑ_N(K_ε)` in degree `order`.
pub fn vassiliev_eval(
    alg: &Algebra,
    sk: &SingularKnot,
    order: usize,
    opts: &EngineOptions,
    table: &AnomalyTable,
) -> Result<VassilievReport> {
    opts.check_order(order)?;
    let j = sk.order();
    if j > opts.max_double_points {
        return Err(Error::Cap(format!("{j} double points exceed the configured maximum {}", opts.max_double_points)));
    }
    let res = family_resolution(opts, sk.amplitude);
    let members: Vec<(Vec<i8>, KnotEmbedding)> =
        sk.members().iter().map(|(e, k)| (e.clone(), k.clone().with_framing(Framing::Default))).collect();
    let signs: Vec<f64> = members.iter().map(|(e, _)| e.iter().map(|&x| x as f64).product()).collect();
    let quad: Vec<(f64, f64, f64)> = members
        .par_iter()
        .map(|(_, k)| {
            let i = integrator::self_linking_with(k, res)?;
            Ok((i.value, i.std_error, integrator::torsion_with(k, res)?))
        })
        .collect::<Result<_>>()?;
    let taus: Vec<f64> = quad.iter().map(|q| q.2).collect();

    let (alpha, parts) = table.alpha(alg, order)?;
    // α^m/m! for m = 0..=order
    let mut powers = vec![DiagramSeries::one(alg, order)?];
    for m in 1..=order {
        powers.push(powers[m - 1].mul(alg, &alpha)?.scale(&(1.0 / m as f64)));
    }
    let dim = alg.dim(order)?;
    let mut values = vec![0.0; dim];
    let mut cov = vec![vec![0.0; dim]; dim];

    // Z₀ = 1: Σ_ε c_ε [exp(α τ_ε)]_N, with the anomaly entries' uncertainty
    for (c, tau) in signs.iter().zip(&taus) {
        let e = alpha.scale(tau).exp(alg)?;
        for (v, x) in values.iter_mut().zip(&e.coeffs[order].coords) {
            *v += c * x;
        }
    }
    for (sigma, unit) in &parts {
        if *sigma == 0.0 {
            continue;
        }
        let mut d = vec![0.0; dim];
        for (c, tau) in signs.iter().zip(&taus) {
            let base = alpha.scale(tau).exp(alg)?;
            let bumped = alpha.add(unit).scale(tau).exp(alg)?;
            for (k, x) in d.iter_mut().enumerate() {
                *x += c * (bumped.coeffs[order].coords[k] - base.coeffs[order].coords[k]) * sigma;
            }
        }
        add_outer(&mut cov, &d);
    }

    let hot: Vec<HotPair> = sk.hot_pairs().into_iter().map(|(a, b, gamma)| HotPair { a, b, gamma }).collect();
    let knots: Vec<&KnotEmbedding> = members.iter().map(|m| &m.1).collect();
    let mut terms = Vec::new();
    for t in graph_terms(alg, order)? {
        // rows[k][ε] = c_ε Σ_m τ_ε^m [e_Γ α^m/m!]_{N,k}
        let e = single(alg, order, &t.weight)?;
        let shifted: Vec<DiagramSeries<f64>> =
            (0..=order - t.degree).map(|m| e.mul(alg, &powers[m])).collect::<Result<_>>()?;
        let rows: Vec<Vec<f64>> = (0..dim)
            .map(|k| {
                signs
                    .iter()
                    .zip(&taus)
                    .map(|(c, tau)| c * shifted.iter().enumerate().map(|(m, s)| tau.powi(m as i32) * s.coeffs[order].coords[k]).sum::<f64>())
                    .collect()
            })
            .collect();
        if rows.iter().all(|r| r.iter().all(|x| *x == 0.0)) {
            continue;
        }
        let (vals, tcov, samples) = if t.is_theta() && opts.theta_quadrature {
            let v: Vec<f64> = rows.iter().map(|r| r.iter().zip(&quad).map(|(w, q)| w * q.0).sum()).collect();
            // member errors treated as fully correlated
            let s: Vec<f64> = rows.iter().map(|r| r.iter().zip(&quad).map(|(w, q)| (w * q.1).abs()).sum()).collect();
            let c: Vec<Vec<f64>> = s.iter().map(|a| s.iter().map(|b| a * b).collect()).collect();
            (v, c, 0)
        } else {
            let plan = GraphPlan::new(&t.graph);
            let f = integrate_family_rows(&plan, &sk.base, &knots, &rows, &hot, &opts.mc())?;
            (f.values, f.covariance, f.samples)
        };
        for k in 0..dim {
            values[k] += vals[k];
            for l in 0..dim {
                cov[k][l] += tcov[k][l];
            }
        }
        terms.push(DifferenceTerm {
            graph: t.graph.code(),
            degree: t.degree,
            std_errors: (0..dim).map(|k| tcov[k][k].max(0.0).sqrt()).collect(),
            values: vals,
            samples,
        });
    }

    let chord = chord_diagram_of(sk);
    let chord_coords = if j == order { alg.project(&chord)?.coords.iter().map(f64::from_q).collect() } else { Vec::new() };
    let mut provenance = Provenance::of(opts, Some(table.hash()));
    provenance.resolution = res;
    Ok(VassilievReport {
        order,
        double_points: j,
        chord_diagram: chord.code(),
        chord_coords,
        basis: alg.basis(order)?.labels(),
        std_errors: (0..dim).map(|k| cov[k][k].max(0.0).sqrt()).collect(),
        values,
        covariance: cov,
        members: members
            .iter()
            .zip(&quad)
            .map(|((e, _), q)| MemberReport { signs: e.clone(), self_linking: q.0, torsion: q.2 })
            .collect(),
        terms,
        amplitude: sk.amplitude,
        provenance,
    })
}
