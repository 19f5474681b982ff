//! Anomaly coefficients `f_Γ` of primitive graphs and the element
//! `α = ½ Σ f_Γ D(Γ)/|Aut Γ|`.

use serde::{Deserialize, Serialize};

use super::report::CoefficientReport;
use super::single;
use crate::algebra::{Algebra, Coeff, Diagram, DiagramSeries};
use crate::error::{Error, Result};
use crate::graph::{Symmetry, WilsonGraph};
use crate::integrator::{anomaly, GraphPlan, McOptions, Method};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnomalyEntry {
    /// Canonical key of the graph (sign `+1` representative).
    pub graph: String,
    pub degree: usize,
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnomalyTable {
    pub entries: Vec<AnomalyEntry>,
}

/// Primitive graphs of degree `d` that can contribute to `α`.
fn candidates(alg: &Algebra, d: usize) -> Result<Vec<(WilsonGraph, Symmetry, Vec<f64>)>> {
    let basis = alg.basis(d)?;
    let mut out = Vec::new();
    for (i, g) in basis.graphs().iter().enumerate() {
        let sym = basis.symmetry(i);
        if !g.is_primitive() || sym.self_negating() || GraphPlan::new(g).vanishes() {
            continue;
        }
        let coords: Vec<f64> = basis.coords_of(i).iter().map(f64::from_q).collect();
        if coords.iter().any(|c| *c != 0.0) {
            out.push((g.clone(), sym, coords));
        }
    }
    Ok(out)
}

fn fnv_hex(s: &str) -> String {
    let h = s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    format!("{h:016x}")
}

impl AnomalyTable {
    /// `f_Θ = 2` and `f_Γ = 0` for even-degree primitive graphs through `max_degree`.
    pub fn builtin(alg: &Algebra, max_degree: usize) -> Result<Self> {
        let mut t = AnomalyTable::default();
        for d in 1..=max_degree {
            if d != 1 && d % 2 == 1 {
                continue;
            }
            for (g, _, _) in candidates(alg, d)? {
                let (value, method) = if d == 1 { (2.0, Method::Exact) } else { (0.0, Method::ExactZero) };
                t.insert(AnomalyEntry { graph: g.key().to_string(), degree: d, value, std_error: 0.0, method });
            }
        }
        Ok(t)
    }

    /// Built-in entries plus Monte-Carlo estimates for odd degrees `≥ 3`.
    pub fn compute(alg: &Algebra, max_degree: usize, opts: &McOptions) -> Result<Self> {
        let mut t = Self::builtin(alg, max_degree)?;
        for d in (3..=max_degree).step_by(2) {
            for (g, _, _) in candidates(alg, d)? {
                let e = anomaly(&g, opts)?;
                t.insert(AnomalyEntry { graph: g.key().to_string(), degree: d, value: e.value, std_error: e.std_error, method: e.method });
            }
        }
        Ok(t)
    }

    /// Monte-Carlo estimates of `f_Γ` for every contributing primitive graph of degree `degree`.
    pub fn measure(alg: &Algebra, degree: usize, opts: &McOptions) -> Result<Self> {
        let mut t = AnomalyTable::default();
        for (g, _, _) in candidates(alg, degree)? {
            let e = anomaly(&g, opts)?;
            t.insert(AnomalyEntry { graph: g.key().to_string(), degree, value: e.value, std_error: e.std_error, method: e.method });
        }
        Ok(t)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Entries of `other` replace entries for the same graph.
    pub fn merge(&mut self, other: &AnomalyTable) {
        for e in &other.entries {
            self.insert(e.clone());
        }
    }

    pub fn insert(&mut self, e: AnomalyEntry) {
        self.entries.retain(|x| x.graph != e.graph);
        self.entries.push(e);
        self.entries.sort_by(|a, b| (a.degree, &a.graph).cmp(&(b.degree, &b.graph)));
    }

    /// `(f_Γ, σ)` for any orientation of a listed graph.
    pub fn get(&self, g: &WilsonGraph) -> Option<(f64, f64)> {
        let c = g.canonical();
        let key = c.key.to_string();
        self.entries.iter().find(|e| e.graph == key).map(|e| (e.value * c.sign as f64, e.std_error))
    }

    /// `α` through `order`, and for each estimated entry `(σ, ∂α/∂f_Γ)`.
    pub fn alpha(&self, alg: &Algebra, order: usize) -> Result<(DiagramSeries<f64>, Vec<(f64, DiagramSeries<f64>)>)> {
        let mut alpha = DiagramSeries::zero(alg, order)?;
        let mut parts = Vec::new();
        for d in 1..=order {
            for (g, sym, coords) in candidates(alg, d)? {
                let (f, sigma) = match self.get(&g) {
                    Some(x) => x,
                    None if d == 1 => (2.0, 0.0),
                    None if d % 2 == 0 => (0.0, 0.0),
                    None => {
                        return Err(Error::Input(format!("anomaly table has no entry for the degree-{d} primitive graph {}", g.code())))
                    }
                };
                let unit = Diagram { degree: d, coords: coords.iter().map(|c| 0.5 * c / sym.aut as f64).collect() };
                alpha.coeffs[d] = alpha.coeffs[d].add(&unit.scale(&f));
                parts.push((sigma, single(alg, order, &unit)?));
            }
        }
        Ok((alpha, parts))
    }

    pub fn alpha_report(&self, alg: &Algebra, order: usize) -> Result<Vec<CoefficientReport>> {
        let (alpha, parts) = self.alpha(alg, order)?;
        let mut acc = super::Accum::new(alpha);
        for (sigma, d) in &parts {
            acc.add(0.0, *sigma, d);
        }
        CoefficientReport::from_accum(alg, &acc)
    }

    /// Stable fingerprint of the table contents.
    pub fn hash(&self) -> String {
        fnv_hex(&serde_json::to_string(self).expect("table serializes"))
    }
}
