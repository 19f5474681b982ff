//! Configuration-space integrals of Wilson graphs over a knot.
//!
//! The integrand of a graph is the product over its non-Wilson edges of the
//! pulled-back Gauss form, integrated with the orientation built from the
//! vertex orders: each edge `(u, v)` contributes `dX_v^{o_v(e)} ∧ dX_u^{o_u(e)}`.
//! Monte-Carlo estimates are split into seeded chunks that are merged in a
//! fixed order, so results do not depend on the thread count.

mod anomaly;
mod quadrature;
mod sampler;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use anomaly::{anomaly, AnomalyPoint};
pub use sampler::HotPair;
pub(crate) use sampler::random_direction as random_unit;
pub use quadrature::{linking_number, DEFAULT_RESOLUTION, resolve_framing, self_linking, self_linking_with, torsion, torsion_with};

use crate::error::{Error, Result};
use crate::graph::{permutation_sign, WilsonGraph};
use crate::knot::{KnotEmbedding, V3};
use sampler::{ConfigSampler, SamplerSetup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    MonteCarlo,
    Quadrature,
    Exact,
    ExactZero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub method: Method,
}

impl IntegralEstimate {
    pub fn exact_zero(seed: u64) -> Self {
        IntegralEstimate { value: 0.0, std_error: 0.0, samples: 0, seed, method: Method::ExactZero }
    }

    pub fn scale(&self, c: f64) -> Self {
        IntegralEstimate { value: self.value * c, std_error: self.std_error * c.abs(), ..self.clone() }
    }
}

/// Monte-Carlo settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McOptions {
    pub samples: u64,
    pub seed: u64,
    #[serde(default = "default_chunk")]
    pub chunk: u64,
    /// Hard-core radius as a fraction of the knot diameter.
    #[serde(default = "default_core")]
    pub core: f64,
}

fn default_chunk() -> u64 {
    4096
}

fn default_core() -> f64 {
    1e-6
}

impl McOptions {
    pub fn new(samples: u64, seed: u64) -> Self {
        McOptions { samples, seed, chunk: default_chunk(), core: default_core() }
    }
}

/// `u(x) = x/|x|`.
pub fn unit(x: V3) -> Result<V3> {
    let n = x.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Numeric("direction of a zero or non-finite vector".into()));
    }
    Ok(x / n)
}

/// Value of `u*ω` at `x` on tangent vectors `v`, `w`:
/// `x·(v × w) / (4π|x|³)`, the signed solid-angle density.
pub fn gauss_form(x: V3, v: V3, w: V3) -> Result<f64> {
    let n = x.norm();
    if !(n > 0.0) {
        return Err(Error::Numeric("Gauss form at the origin".into()));
    }
    Ok(x.dot(&v.cross(&w)) / (4.0 * PI * n * n * n))
}

/// A point of `C_{n,t}`: `n` cyclically ordered circle parameters (stored
/// lifted, strictly increasing with total span below one) and `t` points of ℝ³.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigPoint {
    pub s: Vec<f64>,
    pub x: Vec<V3>,
}

impl ConfigPoint {
    pub fn new(s: Vec<f64>, x: Vec<V3>) -> Result<Self> {
        for w in s.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Input("circle parameters must increase".into()));
            }
        }
        if let (Some(a), Some(b)) = (s.first(), s.last()) {
            if !(b - a < 1.0) {
                return Err(Error::Input("circle parameters must span less than one turn".into()));
            }
        }
        Ok(ConfigPoint { s, x })
    }

    /// Mirror image under `x ↦ −x`.
    pub fn mirrored(&self) -> Self {
        ConfigPoint { s: self.s.clone(), x: self.x.iter().map(|x| -x).collect() }
    }
}

/// Precomputed data for evaluating a graph's integrand.
#[derive(Clone, Debug)]
pub struct GraphPlan {
    n: usize,
    t: usize,
    edges: Vec<(usize, usize)>,
    sign: f64,
    vanishes: bool,
    stream: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

impl GraphPlan {
    pub fn new(g: &WilsonGraph) -> Self {
        let n = g.n_ext();
        let t = g.n_int();
        let coord = |v: usize, slot: usize| if v < n { v } else { n + 3 * (v - n) + slot };
        let slot = |d: usize| g.order(g.dart_vertex(d)).iter().position(|&x| x == d).expect("dart listed");
        let mut seq = Vec::with_capacity(2 * g.edges().len());
        for (k, &(a, b)) in g.edges().iter().enumerate() {
            seq.push(coord(b, slot(2 * k + 1)));
            seq.push(coord(a, slot(2 * k)));
        }
        let vanishes = g.has_self_loop() || g.has_multi_edge() || !g.is_trivalent() || seq.len() != n + 3 * t;
        let sign = if vanishes { 0.0 } else { (g.sign() * permutation_sign(&seq)) as f64 };
        let key = g.key().to_string();
        GraphPlan { n, t, edges: g.edges().to_vec(), sign, vanishes, stream: fnv(&key) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `sign(or) · sign(Ω)`; zero for graphs whose form vanishes identically
    /// (self-loops, or parallel edges, whose forms are pulled back along the same map).
    pub fn orientation_sign(&self) -> f64 {
        self.sign
    }

    pub fn vanishes(&self) -> bool {
        self.vanishes
    }

    /// Density with respect to `ds_1…ds_n d³x_1…d³x_t`.
    pub fn density(&self, k: &KnotEmbedding, p: &ConfigPoint) -> Result<f64> {
        if p.s.len() != self.n || p.x.len() != self.t {
            return Err(Error::Input("configuration point does not match the graph".into()));
        }
        if self.vanishes {
            return Ok(0.0);
        }
        let pos: Vec<V3> = p.s.iter().map(|&s| k.point(s)).chain(p.x.iter().cloned()).collect();
        let vel: Vec<V3> = p.s.iter().map(|&s| k.d1(s)).collect();
        let n = self.n;
        let dim = n + 3 * self.t;
        let det = edge_jacobian_det(&self.edges, &pos, dim, |v, c| {
            if v < n {
                if c == v { Some(vel[v]) } else { None }
            } else if (c >= n) && (c - n) / 3 == v - n {
                let mut e = V3::zeros();
                e[(c - n) % 3] = 1.0;
                Some(e)
            } else {
                None
            }
        })?;
        Ok(self.sign * det)
    }
}

/// `det J / (4π)^E` where row pair `e` of `J` is the derivative of `u(x_e)`,
/// `x_e = pos[head] − pos[tail]`, expressed in an oriented orthonormal frame
/// of the tangent plane at `u(x_e)`. `deriv(v, c)` is `∂pos[v]/∂coord_c`.
pub(crate) fn edge_jacobian_det(
    edges: &[(usize, usize)],
    pos: &[V3],
    dim: usize,
    deriv: impl Fn(usize, usize) -> Option<V3>,
) -> Result<f64> {
    if 2 * edges.len() != dim {
        return Err(Error::Contract("form degree differs from the dimension".into()));
    }
    let mut j = DMatrix::<f64>::zeros(dim, dim);
    for (e, &(a, b)) in edges.iter().enumerate() {
        let x = pos[b] - pos[a];
        let r = x.norm();
        if !(r > 0.0) {
            return Err(Error::Numeric("coincident endpoints in the integrand".into()));
        }
        let u = x / r;
        let helper = if u.x.abs() < 0.9 { V3::x() } else { V3::y() };
        let fa = u.cross(&helper).normalize();
        let fb = u.cross(&fa);
        for c in 0..dim {
            let dx = match (deriv(b, c), deriv(a, c)) {
                (None, None) => continue,
                (Some(p), None) => p,
                (None, Some(q)) => -q,
                (Some(p), Some(q)) => p - q,
            };
            j[(2 * e, c)] = fa.dot(&dx) / r;
            j[(2 * e + 1, c)] = fb.dot(&dx) / r;
        }
    }
    Ok(j.determinant() / (4.0 * PI).powi(edges.len() as i32))
}

/// Integrand of `g` at `p`.
pub fn integrand(g: &WilsonGraph, k: &KnotEmbedding, p: &ConfigPoint) -> Result<f64> {
    GraphPlan::new(g).density(k, p)
}

#[derive(Clone, Copy, Default)]
pub(crate) struct Moments {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

pub(crate) trait Merge {
    fn merge(self, o: Self) -> Self;
}

impl Merge for Moments {
    fn merge(self, o: Moments) -> Moments {
        Moments { n: self.n + o.n, sum: self.sum + o.sum, sum_sq: self.sum_sq + o.sum_sq }
    }
}

/// Sums for the mean and covariance of a vector-valued sample.
pub(crate) struct VecMoments {
    n: u64,
    sum: Vec<f64>,
    outer: Vec<f64>,
}

impl VecMoments {
    pub fn new(r: usize) -> Self {
        VecMoments { n: 0, sum: vec![0.0; r], outer: vec![0.0; r * r] }
    }

    pub fn push(&mut self, y: &[f64]) {
        let r = self.sum.len();
        self.n += 1;
        for i in 0..r {
            self.sum[i] += y[i];
            for j in 0..r {
                self.outer[i * r + j] += y[i] * y[j];
            }
        }
    }

    pub fn estimate(&self, seed: u64) -> FamilyEstimate {
        let r = self.sum.len();
        let n = self.n as f64;
        let mean: Vec<f64> = self.sum.iter().map(|s| s / n).collect();
        let cov = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        if self.n < 2 {
                            return 0.0;
                        }
                        let c = (self.outer[i * r + j] / n - mean[i] * mean[j]) * n / (n - 1.0) / n;
                        if i == j { c.max(0.0) } else { c }
                    })
                    .collect()
            })
            .collect();
        FamilyEstimate { values: mean, covariance: cov, samples: self.n, seed }
    }
}

impl Merge for VecMoments {
    fn merge(mut self, o: VecMoments) -> VecMoments {
        self.n += o.n;
        self.sum.iter_mut().zip(&o.sum).for_each(|(a, b)| *a += b);
        self.outer.iter_mut().zip(&o.outer).for_each(|(a, b)| *a += b);
        self
    }
}

impl Moments {
    pub fn push(&mut self, w: f64) {
        self.n += 1;
        self.sum += w;
        self.sum_sq += w * w;
    }

    pub fn estimate(&self, seed: u64) -> IntegralEstimate {
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = if self.n > 1 { ((self.sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0) } else { 0.0 };
        IntegralEstimate { value: mean, std_error: (var / n).sqrt(), samples: self.n, seed, method: Method::MonteCarlo }
    }
}

/// Runs `chunk_fn(rng, count)` over seeded chunks in parallel and merges in chunk order.
pub(crate) fn run_chunks<M, F>(samples: u64, chunk: u64, seed: u64, stream: u64, chunk_fn: F) -> Result<M>
where
    M: Merge + Send,
    F: Fn(&mut ChaCha8Rng, u64) -> Result<M> + Sync,
{
    if samples == 0 {
        return Err(Error::Input("sample budget must be positive".into()));
    }
    let chunk = chunk.max(1);
    let count = samples.div_ceil(chunk);
    let base = splitmix(seed ^ splitmix(stream));
    let parts: Vec<Result<M>> = (0..count)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(base);
            rng.set_stream(c);
            let size = chunk.min(samples - c * chunk);
            chunk_fn(&mut rng, size)
        })
        .collect();
    let mut it = parts.into_iter();
    let mut total = it.next().expect("at least one chunk")?;
    for p in it {
        total = total.merge(p?);
    }
    Ok(total)
}

/// Monte-Carlo estimate of `I(Γ)(φ) = ∫_{C_{n,t}} ω(Γ)`.
pub fn integrate(g: &WilsonGraph, k: &KnotEmbedding, opts: &McOptions) -> Result<IntegralEstimate> {
    let plan = GraphPlan::new(g);
    let e = integrate_plan(&plan, k, opts)?;
    // signed zero, so that negation stays bit-exact for vanishing graphs
    Ok(if e.method == Method::ExactZero { e.scale(g.sign() as f64) } else { e })
}

pub fn integrate_plan(plan: &GraphPlan, k: &KnotEmbedding, opts: &McOptions) -> Result<IntegralEstimate> {
    integrate_family(plan, k, &[(1.0, k)], &[], opts)
}

/// Estimate of `Σ cᵢ I(Γ)(Kᵢ)` with common random numbers: every member sees
/// the same random stream, and the sampling laws are taken from `base`.
/// `hot` lists parameter pairs where some member nearly meets itself.
pub fn integrate_family(
    plan: &GraphPlan,
    base: &KnotEmbedding,
    members: &[(f64, &KnotEmbedding)],
    hot: &[HotPair],
    opts: &McOptions,
) -> Result<IntegralEstimate> {
    let knots: Vec<&KnotEmbedding> = members.iter().map(|m| m.1).collect();
    let row: Vec<f64> = members.iter().map(|m| m.0).collect();
    let f = integrate_family_rows(plan, base, &knots, &[row], hot, opts)?;
    if f.samples == 0 {
        return Ok(IntegralEstimate::exact_zero(opts.seed));
    }
    Ok(IntegralEstimate {
        value: f.values[0],
        std_error: f.covariance[0][0].sqrt(),
        samples: f.samples,
        seed: opts.seed,
        method: Method::MonteCarlo,
    })
}

/// Several linear combinations of one graph's integral over a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyEstimate {
    pub values: Vec<f64>,
    /// Covariance of the estimated values.
    pub covariance: Vec<Vec<f64>>,
    pub samples: u64,
    pub seed: u64,
}

/// Row `r` estimates `Σᵢ rows[r][i] · I(Γ)(members[i])`, all rows from the
/// same samples, with their joint covariance.
pub fn integrate_family_rows(
    plan: &GraphPlan,
    base: &KnotEmbedding,
    members: &[&KnotEmbedding],
    rows: &[Vec<f64>],
    hot: &[HotPair],
    opts: &McOptions,
) -> Result<FamilyEstimate> {
    if opts.samples == 0 {
        return Err(Error::Input("sample budget must be positive".into()));
    }
    if rows.iter().any(|r| r.len() != members.len()) {
        return Err(Error::Input("coefficient rows do not match the family".into()));
    }
    let r = rows.len();
    if plan.vanishes || members.is_empty() {
        return Ok(FamilyEstimate { values: vec![0.0; r], covariance: vec![vec![0.0; r]; r], samples: 0, seed: opts.seed });
    }
    let setup = SamplerSetup::for_knot(base, opts.core, hot);
    let sampler = ConfigSampler::new(plan, &setup);
    let m = run_chunks(opts.samples, opts.chunk, opts.seed, plan.stream, |rng, size| {
        let mut m = VecMoments::new(r);
        let mut f = vec![0.0; members.len()];
        let mut y = vec![0.0; r];
        for _ in 0..size {
            let start = rng.clone();
            for (i, k) in members.iter().enumerate() {
                *rng = start.clone();
                f[i] = match sampler.draw(rng, k) {
                    Some((p, weight)) => plan.density(k, &p)? * weight,
                    None => 0.0,
                };
            }
            for (yr, row) in y.iter_mut().zip(rows) {
                *yr = row.iter().zip(&f).map(|(c, v)| c * v).sum();
            }
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::Numeric("non-finite sample".into()));
            }
            m.push(&y);
        }
        Ok(m)
    })?;
    Ok(m.estimate(opts.seed))
}

#[cfg(test)]
mod tests;
