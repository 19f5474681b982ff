//! Importance sampling of configuration points.
//!
//! Circle parameters come from a mixture of the uniform law on the cyclically
//! ordered region and laws that put pairs of parameters near known close
//! approaches of the knot (wrapped Cauchy around each pair). Each internal
//! point is drawn from a mixture of a heavy-tailed radial law around a centre
//! and `1/ρ²`-type laws around the points it is joined to by an edge.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;

use super::{ConfigPoint, GraphPlan};
use crate::knot::{KnotEmbedding, V3};

const GLOBAL_WEIGHT: f64 = 0.25;
const UNIFORM_WEIGHT: f64 = 0.25;

pub(crate) fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> V3 {
    loop {
        let v = V3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Mixture law for one point of ℝ³.
#[derive(Clone, Debug)]
pub(crate) struct PointLaw {
    /// Scale of the radial law `L/(L+r)²` around the centre.
    pub global: f64,
    /// Mean distance of the exponential law around each anchor.
    pub local: f64,
}

impl PointLaw {
    fn global_density(&self, r: f64) -> f64 {
        let l = self.global;
        l / ((l + r) * (l + r)) / (4.0 * PI * r * r)
    }

    fn local_density(&self, r: f64) -> f64 {
        (-r / self.local).exp() / self.local / (4.0 * PI * r * r)
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, centre: V3, anchors: &[V3]) -> V3 {
        let global = anchors.is_empty() || rng.random::<f64>() < GLOBAL_WEIGHT;
        if global {
            let v: f64 = rng.random();
            centre + random_direction(rng) * (self.global * v / (1.0 - v))
        } else {
            let a = anchors[rng.random_range(0..anchors.len())];
            let v: f64 = rng.random();
            a + random_direction(rng) * (-self.local * (1.0 - v).ln())
        }
    }

    pub fn density(&self, x: V3, centre: V3, anchors: &[V3]) -> f64 {
        let g = self.global_density((x - centre).norm());
        if anchors.is_empty() {
            return g;
        }
        let loc: f64 = anchors.iter().map(|a| self.local_density((x - a).norm())).sum::<f64>() / anchors.len() as f64;
        GLOBAL_WEIGHT * g + (1.0 - GLOBAL_WEIGHT) * loc
    }
}

/// Two circle parameters where the knot nearly meets itself, with the
/// parameter scale `gamma` of the close approach.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HotPair {
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
}

fn wrapped_cauchy(x: f64, mu: f64, gamma: f64) -> f64 {
    let rho = (-TAU * gamma).exp();
    (1.0 - rho * rho) / (1.0 + rho * rho - 2.0 * rho * (TAU * (x - mu)).cos())
}

fn draw_wrapped_cauchy<R: Rng + ?Sized>(rng: &mut R, mu: f64, gamma: f64) -> f64 {
    (mu + gamma * (PI * (rng.random::<f64>() - 0.5)).tan()).rem_euclid(1.0)
}

impl HotPair {
    /// Symmetrized product density on the torus.
    fn density(&self, u: f64, v: f64) -> f64 {
        let g = |x, m| wrapped_cauchy(x, m, self.gamma);
        0.5 * (g(u, self.a) * g(v, self.b) + g(u, self.b) * g(v, self.a))
    }
}

/// Law of the `n` cyclically ordered parameters.
#[derive(Clone, Debug)]
pub(crate) struct CircleLaw {
    n: usize,
    hot: Vec<HotPair>,
    /// Mixture components: subsets of hot pairs placed simultaneously.
    components: Vec<(Vec<usize>, f64)>,
    /// Injective sequences of `2k` positions, per subset size `k`.
    slots: Vec<Vec<Vec<usize>>>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn subsets(m: usize, max: usize) -> Vec<Vec<usize>> {
    (1u32..(1u32 << m))
        .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s: &Vec<usize>| s.len() <= max)
        .collect()
}

fn injective(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for seq in &out {
            for p in 0..n {
                if !seq.contains(&p) {
                    let mut s = seq.clone();
                    s.push(p);
                    next.push(s);
                }
            }
        }
        out = next;
    }
    out
}

impl CircleLaw {
    pub fn new(n: usize, hot: &[HotPair]) -> Self {
        let subs = subsets(hot.len(), n / 2);
        let mut components = vec![(Vec::new(), if subs.is_empty() { 1.0 } else { UNIFORM_WEIGHT })];
        let each = (1.0 - UNIFORM_WEIGHT) / subs.len().max(1) as f64;
        components.extend(subs.into_iter().map(|s| (s, each)));
        let kmax = components.iter().map(|c| c.0.len()).max().unwrap_or(0);
        let slots = (0..=kmax).map(|k| injective(n, 2 * k)).collect();
        CircleLaw { n, hot: hot.to_vec(), components, slots }
    }

    /// Lifted increasing parameters.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.n;
        let pick: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = &self.components[0].0;
        for (s, w) in &self.components {
            acc += w;
            if pick < acc {
                chosen = s;
                break;
            }
        }
        let mut s: Vec<f64> = Vec::with_capacity(n);
        for &c in chosen {
            let h = self.hot[c];
            let (p, q) = if rng.random::<bool>() { (h.a, h.b) } else { (h.b, h.a) };
            s.push(draw_wrapped_cauchy(rng, p, h.gamma));
            s.push(draw_wrapped_cauchy(rng, q, h.gamma));
        }
        while s.len() < n {
            s.push(rng.random::<f64>());
        }
        s.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let rot = if n > 0 { rng.random_range(0..n) } else { 0 };
        (0..n).map(|i| if i + rot < n { s[i + rot] } else { s[i + rot - n] + 1.0 }).collect()
    }

    pub fn density(&self, s: &[f64]) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for (sub, w) in &self.components {
            let k = sub.len();
            let mut sum = 0.0;
            for seq in &self.slots[k] {
                let mut prod = 1.0;
                for (i, &c) in sub.iter().enumerate() {
                    prod *= self.hot[c].density(s[seq[2 * i]].rem_euclid(1.0), s[seq[2 * i + 1]].rem_euclid(1.0));
                }
                sum += prod;
            }
            total += w * factorial(n - 2 * k) * sum / n as f64;
        }
        total
    }
}

/// Vertices joined to internal vertex `j` that are drawn before it.
pub(crate) fn anchor_lists(plan: &GraphPlan) -> Vec<Vec<usize>> {
    let n = plan.n();
    (0..plan.t())
        .map(|j| {
            let v = n + j;
            let mut out: Vec<usize> = plan
                .edges()
                .iter()
                .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
                .filter(|&w| w < v)
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect()
}

/// Knot-independent sampling parameters; shared by all members of a family so
/// that their estimates use common random numbers.
#[derive(Clone, Debug)]
pub(crate) struct SamplerSetup {
    pub law: PointLaw,
    pub centre: V3,
    pub core: f64,
    pub hot: Vec<HotPair>,
}

impl SamplerSetup {
    pub fn for_knot(k: &KnotEmbedding, core: f64, hot: &[HotPair]) -> Self {
        let diam = k.diameter();
        SamplerSetup { law: PointLaw { global: diam / 2.0, local: diam / 8.0 }, centre: k.centroid(), core: core * diam, hot: hot.to_vec() }
    }
}

pub(crate) struct ConfigSampler<'a> {
    plan: &'a GraphPlan,
    setup: &'a SamplerSetup,
    circle: CircleLaw,
    anchors: Vec<Vec<usize>>,
}

impl<'a> ConfigSampler<'a> {
    pub fn new(plan: &'a GraphPlan, setup: &'a SamplerSetup) -> Self {
        ConfigSampler { plan, setup, circle: CircleLaw::new(plan.n(), &setup.hot), anchors: anchor_lists(plan) }
    }

    /// A configuration point on `knot` and `1/density`, or `None` inside the hard core.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, knot: &KnotEmbedding) -> Option<(ConfigPoint, f64)> {
        let n = self.plan.n();
        let s = self.circle.draw(rng);
        let mut weight = 1.0 / self.circle.density(&s);
        let mut pos: Vec<V3> = s.iter().map(|&u| knot.point(u)).collect();
        let law = &self.setup.law;
        for j in 0..self.plan.t() {
            let anchors: Vec<V3> = self.anchors[j].iter().map(|&v| pos[v]).collect();
            let x = law.draw(rng, self.setup.centre, &anchors);
            weight /= law.density(x, self.setup.centre, &anchors);
            pos.push(x);
        }
        for &(a, b) in self.plan.edges() {
            if (pos[a] - pos[b]).norm() < self.setup.core {
                return None;
            }
        }
        let x = pos.split_off(n);
        Some((ConfigPoint { s, x }, weight))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn circle_law_is_normalized() {
        // E_q[1_C / q] = vol(C) = 1/(n−1)!
        let hot = [HotPair { a: 0.1, b: 0.6, gamma: 0.01 }, HotPair { a: 0.3, b: 0.85, gamma: 0.02 }];
        for n in [2usize, 3, 4] {
            let law = CircleLaw::new(n, &hot);
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let mut m = super::super::Moments::default();
            for _ in 0..100_000 {
                let s = law.draw(&mut rng);
                m.push(1.0 / law.density(&s));
            }
            let e = m.estimate(0);
            let want = 1.0 / factorial(n - 1);
            assert!((e.value - want).abs() < 4.0 * e.std_error + 1e-12, "n={n}: {} ± {} vs {want}", e.value, e.std_error);
        }
    }

    #[test]
    fn uniform_circle_density() {
        let law = CircleLaw::new(4, &[]);
        assert!((law.density(&[0.1, 0.2, 0.5, 0.9]) - 6.0).abs() < 1e-12);
    }
}
