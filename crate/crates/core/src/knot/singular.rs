//! Singular knots and their desingularizations.
//!
//! Each double point is specified by two parameters of a base embedding whose
//! points are to be brought together. With `d = φ(s₁) − φ(s₂)` and a bump `b`
//! centred at `s₁`, the singular curve is `φ − b d` and the resolutions are
//! `φ − b d ± δ b d`, placed symmetrically about it. `K₊` is the resolution on
//! which the self-linking integral is larger, i.e. the crossing of sign `+1`
//! for the kernel `(φ̇₁ × φ̇₂)·(φ₂ − φ₁)`.

use std::f64::consts::TAU;

use super::{Bump, KnotEmbedding, V3};
use crate::error::{Error, Result};
use crate::graph::WilsonGraph;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingSpec {
    /// Parameter of the strand that is moved.
    pub s1: f64,
    /// Parameter of the strand it is moved onto.
    pub s2: f64,
}

#[derive(Clone, Debug)]
pub struct SingularKnot {
    pub base: KnotEmbedding,
    pub specs: Vec<CrossingSpec>,
    pub width: f64,
    /// Resolution amplitude `δ ∈ (0, 1]`; `δ = 1` keeps the base crossing as one resolution.
    pub amplitude: f64,
    /// Crossing sign of each double point in the base embedding.
    pub base_signs: Vec<i8>,
    members: Vec<(Vec<i8>, KnotEmbedding)>,
}

pub const DEFAULT_AMPLITUDE: f64 = 0.05;

fn periodic_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn sign_vectors(j: usize) -> Vec<Vec<i8>> {
    (0..(1usize << j))
        .map(|m| (0..j).map(|i| if m >> (j - 1 - i) & 1 == 0 { 1 } else { -1 }).collect())
        .collect()
}

impl SingularKnot {
    pub fn new(base: &KnotEmbedding, specs: &[CrossingSpec], width: f64, amplitude: f64) -> Result<Self> {
        let j = specs.len();
        if !(amplitude > 0.0 && amplitude <= 1.0) {
            return Err(Error::InvalidKnot("resolution amplitude must lie in (0, 1]".into()));
        }
        for (i, a) in specs.iter().enumerate() {
            if periodic_dist(a.s1, a.s2) <= width {
                return Err(Error::InvalidKnot(format!("double point {i}: the two strands share the deformation region")));
            }
            for b in &specs[i + 1..] {
                for p in [b.s1, b.s2] {
                    if periodic_dist(a.s1, p) <= 2.0 * width {
                        return Err(Error::InvalidKnot("deformation regions overlap".into()));
                    }
                }
                if periodic_dist(b.s1, a.s2) <= 2.0 * width {
                    return Err(Error::InvalidKnot("deformation regions overlap".into()));
                }
            }
        }
        let mut base_signs = Vec::with_capacity(j);
        let mut disp = Vec::with_capacity(j);
        for c in specs {
            let d = base.point(c.s1) - base.point(c.s2);
            let t = base.d1(c.s1).cross(&base.d1(c.s2));
            let s = d.dot(&t);
            if s == 0.0 {
                return Err(Error::InvalidKnot("degenerate crossing: strands are parallel".into()));
            }
            base_signs.push(if s > 0.0 { -1 } else { 1 });
            disp.push(d);
        }
        let mut members = Vec::with_capacity(1 << j);
        for eps in sign_vectors(j) {
            let bumps: Vec<Bump> = (0..j)
                .map(|i| (i, (eps[i] * base_signs[i]) as f64 * amplitude - 1.0))
                .filter(|&(_, c)| c != 0.0)
                .map(|(i, c)| {
                    let v = disp[i] * c;
                    Bump { center: specs[i].s1, width, displacement: [v.x, v.y, v.z] }
                })
                .collect();
            let mut k = if bumps.is_empty() { base.clone() } else { base.deform(bumps)? };
            k.framing = None;
            let tag: String = eps.iter().map(|&e| if e > 0 { '+' } else { '-' }).collect();
            k.name = format!("{}[{tag}]", base.name);
            members.push((eps, k));
        }
        Ok(SingularKnot { base: base.clone(), specs: specs.to_vec(), width, amplitude, base_signs, members })
    }

    /// The `(2,3)` torus knot with `j ≤ 3` of its three diagram crossings made singular.
    /// Crossings are taken in parameter order, so two of them give interleaved chords.
    pub fn trefoil(j: usize) -> Result<Self> {
        Self::trefoil_with(j, DEFAULT_AMPLITUDE)
    }

    pub fn trefoil_with(j: usize, amplitude: f64) -> Result<Self> {
        if j > 3 {
            return Err(Error::Cap("the trefoil diagram has three crossings".into()));
        }
        let base = KnotEmbedding::torus(2, 3, 2.0, 0.5)?;
        let specs: Vec<CrossingSpec> = [1.0 / 12.0, 3.0 / 12.0, 5.0 / 12.0][..j]
            .iter()
            .map(|&s| CrossingSpec { s1: s, s2: s + 0.5 })
            .collect();
        Self::new(&base, &specs, 0.25 / TAU, amplitude)
    }

    pub fn order(&self) -> usize {
        self.specs.len()
    }

    /// All `2^j` resolutions `(ε, K_ε)`.
    pub fn members(&self) -> &[(Vec<i8>, KnotEmbedding)] {
        &self.members
    }

    pub fn member(&self, eps: &[i8]) -> Option<&KnotEmbedding> {
        self.members.iter().find(|(e, _)| e == eps).map(|(_, k)| k)
    }

    /// Chord diagram joining the two parameters of each double point.
    pub fn chord_diagram(&self) -> WilsonGraph {
        let mut params: Vec<(f64, usize)> = Vec::new();
        for (i, c) in self.specs.iter().enumerate() {
            params.push((c.s1.rem_euclid(1.0), i));
            params.push((c.s2.rem_euclid(1.0), i));
        }
        params.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        let mut ends: Vec<Vec<usize>> = vec![Vec::new(); self.specs.len()];
        for (pos, &(_, i)) in params.iter().enumerate() {
            ends[i].push(pos);
        }
        let chords: Vec<(usize, usize)> = ends.iter().map(|e| (e[0], e[1])).collect();
        WilsonGraph::chord_diagram(&chords).expect("chords form a matching")
    }

    /// `(s₁, s₂, γ)` per double point: the resolved strands pass within
    /// `δ|d|` of each other, over a parameter window of width about `γ`.
    pub fn hot_pairs(&self) -> Vec<(f64, f64, f64)> {
        self.specs
            .iter()
            .map(|c| {
                let gap = self.amplitude * (self.base.point(c.s1) - self.base.point(c.s2)).norm();
                let speed = self.base.d1(c.s1).norm().max(self.base.d1(c.s2).norm());
                (c.s1.rem_euclid(1.0), c.s2.rem_euclid(1.0), gap / speed)
            })
            .collect()
    }

    /// Balls `(centre, radius)` containing every resolution's deformation of each double point.
    pub fn regions(&self) -> Vec<(V3, f64)> {
        self.specs
            .iter()
            .map(|c| {
                let centre = (self.base.point(c.s1) + self.base.point(c.s2)) / 2.0;
                let mut r: f64 = 0.0;
                for (_, k) in &self.members {
                    for i in 0..=64 {
                        let s = c.s1 + self.width * (2.0 * i as f64 / 64.0 - 1.0);
                        r = r.max((k.point(s) - centre).norm());
                    }
                }
                (centre, r)
            })
            .collect()
    }

    /// True when `K_ε` and `K_ε'` agree at `s` for sign vectors differing only at `i`
    /// whenever `s` lies outside the `i`-th deformation interval.
    pub fn agrees_outside(&self, i: usize, s: f64) -> bool {
        if periodic_dist(s, self.specs[i].s1) < self.width {
            return true;
        }
        self.members.iter().all(|(e, k)| {
            let mut f = e.clone();
            f[i] = -f[i];
            let other = self.member(&f).expect("all sign vectors present");
            (k.point(s) - other.point(s)).norm() == 0.0
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes_and_diagrams() {
        let one = SingularKnot::trefoil(1).unwrap();
        assert_eq!(one.members().len(), 2);
        assert!(one.chord_diagram().isomorphic(&WilsonGraph::theta()).is_some());
        let two = SingularKnot::trefoil(2).unwrap();
        assert_eq!(two.members().len(), 4);
        let x = WilsonGraph::chord_diagram(&[(0, 2), (1, 3)]).unwrap();
        assert!(two.chord_diagram().isomorphic(&x).is_some());
    }

    #[test]
    fn nested_specs_give_parallel_chords() {
        let base = KnotEmbedding::torus(2, 3, 2.0, 0.5).unwrap();
        let specs = [CrossingSpec { s1: 0.1, s2: 0.4 }, CrossingSpec { s1: 0.6, s2: 0.9 }];
        let sk = SingularKnot::new(&base, &specs, 0.02, 1.0);
        // these pairs are not actual crossings; only the combinatorics is checked
        if let Ok(sk) = sk {
            let p = WilsonGraph::chord_diagram(&[(0, 1), (2, 3)]).unwrap();
            assert!(sk.chord_diagram().isomorphic(&p).is_some());
        }
    }

    #[test]
    fn resolutions_differ_only_locally() {
        let sk = SingularKnot::trefoil(2).unwrap();
        for i in 0..2 {
            for k in 0..200 {
                assert!(sk.agrees_outside(i, k as f64 / 200.0));
            }
        }
        let r = sk.regions();
        let gap = (r[0].0 - r[1].0).norm() - r[0].1 - r[1].1;
        assert!(gap > 0.0, "regions overlap by {gap}");
    }

    #[test]
    fn overlapping_regions_rejected() {
        let base = KnotEmbedding::torus(2, 3, 2.0, 0.5).unwrap();
        let specs = [CrossingSpec { s1: 0.1, s2: 0.6 }, CrossingSpec { s1: 0.12, s2: 0.62 }];
        assert!(SingularKnot::new(&base, &specs, 0.04, 1.0).is_err());
    }

    #[test]
    fn hot_pairs_cover_each_crossing() {
        let sk = SingularKnot::trefoil(2).unwrap();
        let hp = sk.hot_pairs();
        assert_eq!(hp.len(), 2);
        for (i, (a, b, g)) in hp.iter().enumerate() {
            assert!((a - sk.specs[i].s1).abs() < 1e-12 && (b - sk.specs[i].s2.rem_euclid(1.0)).abs() < 1e-12);
            assert!(*g > 0.0 && *g < sk.width);
        }
    }
}
