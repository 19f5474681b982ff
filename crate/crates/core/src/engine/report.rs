//! JSON reports.

use serde::{Deserialize, Serialize};

use super::{Accum, EngineOptions};
use crate::algebra::{Algebra, Diagram, DiagramSeries};
use crate::error::Result;
use crate::integrator::IntegralEstimate;
use crate::knot::{Framing, KnotEmbedding, KnotSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Z,
    Zhat,
    Difference,
}

/// One degree of a series: real coordinates in the canonical basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub degree: usize,
    pub basis: Vec<String>,
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
}

impl CoefficientReport {
    pub(crate) fn from_accum(alg: &Algebra, acc: &Accum) -> Result<Vec<CoefficientReport>> {
        let errs = acc.std_errors();
        acc.value
            .coeffs
            .iter()
            .zip(errs)
            .map(|(d, e)| {
                Ok(CoefficientReport { degree: d.degree, basis: alg.basis(d.degree)?.labels(), values: d.coords.clone(), std_errors: e })
            })
            .collect()
    }

    pub fn diagram(&self) -> Diagram<f64> {
        Diagram { degree: self.degree, coords: self.values.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotMeta {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<KnotSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub framing: Option<Framing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion: Option<f64>,
}

impl KnotMeta {
    pub fn of(k: &KnotEmbedding, torsion: Option<f64>) -> Self {
        KnotMeta { name: k.name.clone(), spec: k.spec.clone(), framing: k.framing, torsion }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphTermReport {
    pub graph: String,
    pub degree: usize,
    pub aut: u64,
    pub estimate: IntegralEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub samples: u64,
    pub chunk: u64,
    pub core: f64,
    pub resolution: usize,
    pub theta_quadrature: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anomaly_table_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_error: Option<f64>,
}

impl Provenance {
    pub fn of(opts: &EngineOptions, hash: Option<String>) -> Self {
        Provenance {
            seed: opts.seed,
            samples: opts.samples,
            chunk: opts.chunk,
            core: opts.core,
            resolution: opts.resolution,
            theta_quadrature: opts.theta_quadrature,
            anomaly_table_hash: hash,
            converged: None,
            relative_error: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub kind: SeriesKind,
    pub order: usize,
    pub knot: KnotMeta,
    /// Degrees `0..=order`.
    pub coefficients: Vec<CoefficientReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<CoefficientReport>>,
    pub graphs: Vec<GraphTermReport>,
    pub provenance: Provenance,
}

impl InvariantReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn build(
        alg: &Algebra,
        kind: SeriesKind,
        knot: KnotMeta,
        acc: &Accum,
        alpha: Option<Vec<CoefficientReport>>,
        graphs: Vec<GraphTermReport>,
        opts: &EngineOptions,
        hash: Option<String>,
    ) -> Result<Self> {
        Ok(InvariantReport {
            kind,
            order: acc.value.order(),
            knot,
            coefficients: CoefficientReport::from_accum(alg, acc)?,
            alpha,
            graphs,
            provenance: Provenance::of(opts, hash),
        })
    }

    pub fn series(&self) -> DiagramSeries<f64> {
        DiagramSeries { coeffs: self.coefficients.iter().map(|c| c.diagram()).collect() }
    }

    pub fn degree(&self, d: usize) -> Option<&CoefficientReport> {
        self.coefficients.iter().find(|c| c.degree == d)
    }
}
