//! Assembly of `Z`, the anomaly element `α` and the framed invariant
//! `Ẑ = Z · exp(α τ)`, plus finite differences over singular-knot families.
//!
//! Every reported coordinate is linear in the underlying integral estimates
//! (through order 3), so standard errors are propagated exactly: each estimate
//! contributes `σ · |∂ coordinate / ∂ estimate|` in quadrature.

mod anomaly_table;
mod report;
mod vassiliev;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use anomaly_table::{AnomalyEntry, AnomalyTable};
pub use report::{CoefficientReport, GraphTermReport, InvariantReport, KnotMeta, Provenance, SeriesKind};
pub use vassiliev::{chord_diagram_of, vassiliev_eval, VassilievReport};

use crate::algebra::{Algebra, Coeff, Diagram, DiagramSeries};
use crate::error::{Error, Result};
use crate::graph::WilsonGraph;
use crate::integrator::{self, GraphPlan, IntegralEstimate, McOptions};
use crate::knot::KnotEmbedding;

/// Highest order the engine will integrate.
pub const ORDER_CAP: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineOptions {
    /// Monte-Carlo samples per graph.
    pub samples: u64,
    pub seed: u64,
    #[serde(default = "default_chunk")]
    pub chunk: u64,
    /// Hard-core radius as a fraction of the knot diameter.
    #[serde(default = "default_core")]
    pub core: f64,
    /// Quadrature nodes per axis for `I(Θ)` and `τ`.
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    /// Use the deterministic self-linking quadrature for `Θ`.
    #[serde(default = "yes")]
    pub theta_quadrature: bool,
    /// Orders above this are refused; degree 3 integrals are slow.
    #[serde(default = "default_max_order")]
    pub max_order: usize,
    /// Sample cap for budget escalation.
    #[serde(default = "default_max_samples")]
    pub max_samples: u64,
    /// Largest number of double points accepted by finite differences.
    #[serde(default = "default_max_double_points")]
    pub max_double_points: usize,
}

fn default_chunk() -> u64 {
    4096
}
fn default_core() -> f64 {
    1e-6
}
fn default_resolution() -> usize {
    integrator::DEFAULT_RESOLUTION
}
fn yes() -> bool {
    true
}
fn default_max_order() -> usize {
    2
}
fn default_max_samples() -> u64 {
    64_000_000
}
fn default_max_double_points() -> usize {
    2
}

impl EngineOptions {
    pub fn new(samples: u64, seed: u64) -> Self {
        EngineOptions {
            samples,
            seed,
            chunk: default_chunk(),
            core: default_core(),
            resolution: default_resolution(),
            theta_quadrature: true,
            max_order: default_max_order(),
            max_samples: default_max_samples(),
            max_double_points: default_max_double_points(),
        }
    }

    pub fn mc(&self) -> McOptions {
        McOptions { samples: self.samples, seed: self.seed, chunk: self.chunk, core: self.core }
    }

    fn check_order(&self, order: usize) -> Result<()> {
        let cap = self.max_order.min(ORDER_CAP);
        if order > cap {
            return Err(Error::Cap(format!("order {order} exceeds the integration cap {cap}")));
        }
        if self.samples == 0 {
            return Err(Error::Input("sample budget must be positive".into()));
        }
        if self.samples > self.max_samples {
            return Err(Error::Cap(format!("budget {} exceeds the sample cap {}", self.samples, self.max_samples)));
        }
        Ok(())
    }
}

/// A graph that contributes `I(Γ)/|Aut Γ| · D(Γ)` to `Z`.
#[derive(Clone, Debug)]
pub(crate) struct GraphTerm {
    pub graph: WilsonGraph,
    pub degree: usize,
    pub aut: u64,
    /// `D(Γ)/|Aut Γ|` in basis coordinates.
    pub weight: Diagram<f64>,
}

impl GraphTerm {
    pub fn is_theta(&self) -> bool {
        self.degree == 1
    }
}

/// Graphs of degree `1..=order` with nonzero `D(Γ)` and a nonvanishing form.
pub(crate) fn graph_terms(alg: &Algebra, order: usize) -> Result<Vec<GraphTerm>> {
    let mut out = Vec::new();
    for d in 1..=order {
        let basis = alg.basis(d)?;
        for (i, g) in basis.graphs().iter().enumerate() {
            let sym = basis.symmetry(i);
            if sym.self_negating() || GraphPlan::new(g).vanishes() {
                continue;
            }
            let coords: Vec<f64> = basis.coords_of(i).iter().map(f64::from_q).collect();
            if coords.iter().all(|c| *c == 0.0) {
                continue;
            }
            let weight = Diagram { degree: d, coords: coords.iter().map(|c| c / sym.aut as f64).collect() };
            out.push(GraphTerm { graph: g.clone(), degree: d, aut: sym.aut, weight });
        }
    }
    Ok(out)
}

/// Linear combination of estimates with exactly propagated variances.
#[derive(Clone, Debug)]
pub(crate) struct Accum {
    pub value: DiagramSeries<f64>,
    pub var: Vec<Vec<f64>>,
}

impl Accum {
    pub fn new(start: DiagramSeries<f64>) -> Self {
        let var = start.coeffs.iter().map(|d| vec![0.0; d.coords.len()]).collect();
        Accum { value: start, var }
    }

    /// Adds `x · v` where `x` has standard error `sigma`.
    pub fn add(&mut self, x: f64, sigma: f64, v: &DiagramSeries<f64>) {
        for (k, d) in v.coeffs.iter().enumerate().take(self.value.coeffs.len()) {
            for (j, c) in d.coords.iter().enumerate() {
                self.value.coeffs[k].coords[j] += x * c;
                self.var[k][j] += (sigma * c).powi(2);
            }
        }
    }

    pub fn std_errors(&self) -> Vec<Vec<f64>> {
        self.var.iter().map(|r| r.iter().map(|v| v.sqrt()).collect()).collect()
    }
}

pub(crate) fn single(alg: &Algebra, order: usize, d: &Diagram<f64>) -> Result<DiagramSeries<f64>> {
    let mut s = DiagramSeries::zero(alg, order)?;
    if d.degree <= order {
        s.coeffs[d.degree] = d.clone();
    }
    Ok(s)
}

/// `I(Γ)(k)` by the configured method.
pub(crate) fn estimate_term(t: &GraphTerm, k: &KnotEmbedding, opts: &EngineOptions) -> Result<IntegralEstimate> {
    if t.is_theta() && opts.theta_quadrature {
        let mut e = integrator::self_linking_with(k, opts.resolution)?;
        e.seed = opts.seed;
        Ok(e)
    } else {
        integrator::integrate(&t.graph, k, &opts.mc())
    }
}

fn estimate_all(terms: &[GraphTerm], k: &KnotEmbedding, opts: &EngineOptions) -> Result<Vec<IntegralEstimate>> {
    terms.par_iter().map(|t| estimate_term(t, k, opts)).collect()
}

fn term_reports(terms: &[GraphTerm], est: &[IntegralEstimate]) -> Vec<GraphTermReport> {
    terms
        .iter()
        .zip(est)
        .map(|(t, e)| GraphTermReport { graph: t.graph.code(), degree: t.degree, aut: t.aut, estimate: e.clone() })
        .collect()
}

/// `Z(k)` through `order`.
pub fn compute_z(alg: &Algebra, k: &KnotEmbedding, order: usize, opts: &EngineOptions) -> Result<InvariantReport> {
    opts.check_order(order)?;
    let terms = graph_terms(alg, order)?;
    let est = estimate_all(&terms, k, opts)?;
    let mut acc = Accum::new(DiagramSeries::one(alg, order)?);
    for (t, e) in terms.iter().zip(&est) {
        acc.add(e.value, e.std_error, &single(alg, order, &t.weight)?);
    }
    InvariantReport::build(alg, SeriesKind::Z, KnotMeta::of(k, None), &acc, None, term_reports(&terms, &est), opts, None)
}

/// `exp(α τ)` and its sensitivities to each anomaly entry.
pub(crate) fn exp_alpha_tau(
    alg: &Algebra,
    table: &AnomalyTable,
    order: usize,
    tau: f64,
) -> Result<(DiagramSeries<f64>, Vec<(f64, DiagramSeries<f64>)>)> {
    let (alpha, parts) = table.alpha(alg, order)?;
    let e = alpha.scale(&tau).exp(alg)?;
    let mut sens = Vec::new();
    for (sigma, unit) in parts {
        if sigma == 0.0 {
            continue;
        }
        // exact through order 3, where `α` enters linearly beyond degree 1
        let bumped = alpha.add(&unit).scale(&tau).exp(alg)?;
        let diff = DiagramSeries { coeffs: bumped.coeffs.iter().zip(&e.coeffs).map(|(a, b)| a.sub(b)).collect() };
        sens.push((sigma, diff));
    }
    Ok((e, sens))
}

/// `Ẑ(k) = Z(k) · exp(α τ(k))` through `order`; `k` must carry a framing.
pub fn compute_zhat(
    alg: &Algebra,
    k: &KnotEmbedding,
    order: usize,
    opts: &EngineOptions,
    table: &AnomalyTable,
) -> Result<InvariantReport> {
    opts.check_order(order)?;
    if k.framing.is_none() {
        return Err(Error::Input("the framed invariant needs a framing".into()));
    }
    let tau = integrator::torsion_with(k, opts.resolution)?;
    let (e, sens) = exp_alpha_tau(alg, table, order, tau)?;
    let terms = graph_terms(alg, order)?;
    let est = estimate_all(&terms, k, opts)?;
    let mut acc = Accum::new(e.clone());
    for (sigma, d) in &sens {
        acc.add(0.0, *sigma, d);
    }
    for (t, x) in terms.iter().zip(&est) {
        let v = single(alg, order, &t.weight)?.mul(alg, &e)?;
        acc.add(x.value, x.std_error, &v);
    }
    let alpha = table.alpha_report(alg, order)?;
    InvariantReport::build(
        alg,
        SeriesKind::Zhat,
        KnotMeta::of(k, Some(tau)),
        &acc,
        Some(alpha),
        term_reports(&terms, &est),
        opts,
        Some(table.hash()),
    )
}

/// Largest standard error over the top-degree coordinates relative to the
/// largest top-degree coefficient, per degree `1..=order`.
pub fn relative_power(r: &InvariantReport) -> f64 {
    r.coefficients
        .iter()
        .filter(|c| c.degree >= 1)
        .map(|c| {
            let m = c.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let s = c.std_errors.iter().fold(0.0f64, |a, v| a.max(*v));
            if m > 0.0 { s / m } else if s == 0.0 { 0.0 } else { f64::INFINITY }
        })
        .fold(0.0, f64::max)
}

/// Runs `run` with budgets growing by 4× from `opts.samples` until every
/// degree has `σ ≤ rel · max|coefficient|` or the next budget exceeds the cap.
pub fn escalate<F>(opts: &EngineOptions, rel: f64, run: F) -> Result<InvariantReport>
where
    F: Fn(&EngineOptions) -> Result<InvariantReport>,
{
    let mut o = opts.clone();
    loop {
        let mut r = run(&o)?;
        let p = relative_power(&r);
        r.provenance.relative_error = Some(p);
        if p <= rel {
            r.provenance.converged = Some(true);
            return Ok(r);
        }
        if o.samples.saturating_mul(4) > o.max_samples {
            r.provenance.converged = Some(false);
            return Ok(r);
        }
        o.samples *= 4;
    }
}
