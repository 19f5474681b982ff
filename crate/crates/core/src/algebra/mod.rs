//! Bar-Natan diagrams: the space `𝒜 = ⊕ 𝒜_n`, its product, the primitive
//! projector and truncated series.
//!
//! All structure is computed in exact rational arithmetic. Diagrams are stored
//! as coordinate vectors over the basis of their degree; the coefficient type
//! is generic so that numerical series (integrals times diagrams) reuse the
//! same structure constants.

mod basis;
pub mod linalg;
mod marked;
mod series;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use basis::{Basis, ColumnOrder, Relation, RowOrder};
pub use linalg::Q;
pub use marked::{
    product_identity_sides, marking_classes, multishuffles, partition_count, shuffle_product, shuffle_tally, shuffles,
    MarkedGraph, ShuffleTally,
};
pub use series::DiagramSeries;

use crate::error::{Error, Result};
use crate::graph::{Classification, EnumerationCaps, WilsonGraph};
use linalg::{q, rank, solve};

/// Scalars a diagram can be weighted by.
pub trait Coeff:
    Clone + Debug + PartialEq + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_q(x: &Q) -> Self;
}

impl Coeff for Q {
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
}

impl Coeff for f64 {
    fn from_q(x: &Q) -> Self {
        x.to_f64().unwrap_or(f64::NAN)
    }
}

/// An element of `𝒜_n` in basis coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagram<T = Q> {
    pub degree: usize,
    pub coords: Vec<T>,
}

impl<T: Coeff> Diagram<T> {
    pub fn zero(degree: usize, dim: usize) -> Self {
        Diagram { degree, coords: vec![T::zero(); dim] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &T) -> Self {
        Diagram { degree: self.degree, coords: self.coords.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding diagrams of different degree");
        Diagram {
            degree: self.degree,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Diagram<U> {
        Diagram { degree: self.degree, coords: self.coords.iter().map(f).collect() }
    }
}

impl Diagram<Q> {
    pub fn to_f64(&self) -> Diagram<f64> {
        self.map(f64::from_q)
    }
}

/// Ordered compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Exact rational in `p/q` text form.
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::Input(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// JSON form of a rational diagram: nonzero coefficients keyed by basis label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub degree: usize,
    pub coefficients: BTreeMap<String, String>,
}

/// The graded algebra `𝒜` through a maximal degree.
#[derive(Clone, Debug)]
pub struct Algebra {
    max_degree: usize,
    bases: Vec<Basis>,
    /// `(p, q) -> [i][j] -> coordinates of e_i · e_j` for `p, q >= 1`.
    structure: HashMap<(usize, usize), Vec<Vec<Vec<Q>>>>,
    /// Matrix of `C` on each degree, `c_matrix[n][k]` = image of the k-th basis vector.
    c_matrix: Vec<Vec<Vec<Q>>>,
}

impl Algebra {
    pub fn new(max_degree: usize) -> Result<Algebra> {
        let caps = EnumerationCaps { max_degree: max_degree.max(EnumerationCaps::default().max_degree) };
        let mut bases = vec![Basis::unit()];
        for n in 1..=max_degree {
            bases.push(Basis::build(n, &caps)?);
        }
        let mut alg = Algebra { max_degree, bases, structure: HashMap::new(), c_matrix: Vec::new() };
        for p in 1..=max_degree {
            for r in 1..=(max_degree - p) {
                let bp: Vec<WilsonGraph> = alg.bases[p].elements().into_iter().cloned().collect();
                let br: Vec<WilsonGraph> = alg.bases[r].elements().into_iter().cloned().collect();
                let mut table = Vec::with_capacity(bp.len());
                for a in &bp {
                    let mut row = Vec::with_capacity(br.len());
                    for b in &br {
                        row.push(alg.bases[p + r].project_coords(&a.connected_sum(b))?);
                    }
                    table.push(row);
                }
                alg.structure.insert((p, r), table);
            }
        }
        let mut cm = vec![vec![vec![q(1)]]];
        for n in 1..=max_degree {
            cm.push(alg.build_c(n)?);
        }
        alg.c_matrix = cm;
        Ok(alg)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn basis(&self, n: usize) -> Result<&Basis> {
        self.bases
            .get(n)
            .ok_or_else(|| Error::Cap(format!("degree {n} exceeds the built algebra (max {})", self.max_degree)))
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        Ok(self.basis(n)?.dim())
    }

    pub fn zero<T: Coeff>(&self, n: usize) -> Result<Diagram<T>> {
        Ok(Diagram::zero(n, self.dim(n)?))
    }

    pub fn unit<T: Coeff>(&self) -> Diagram<T> {
        Diagram { degree: 0, coords: vec![T::one()] }
    }

    /// `D(Γ)`.
    pub fn project(&self, g: &WilsonGraph) -> Result<Diagram<Q>> {
        let n = g.degree()?;
        Ok(Diagram { degree: n, coords: self.basis(n)?.project_coords(g)? })
    }

    /// Basis vector `k` of degree `n`.
    pub fn basis_vector<T: Coeff>(&self, n: usize, k: usize) -> Result<Diagram<T>> {
        let mut d = self.zero(n)?;
        d.coords[k] = T::one();
        Ok(d)
    }

    pub fn product<T: Coeff>(&self, a: &Diagram<T>, b: &Diagram<T>) -> Result<Diagram<T>> {
        let n = a.degree + b.degree;
        if n > self.max_degree {
            return Err(Error::Cap(format!("product of degree {n} exceeds the built algebra")));
        }
        if a.degree == 0 {
            return Ok(b.scale(&a.coords[0]));
        }
        if b.degree == 0 {
            return Ok(a.scale(&b.coords[0]));
        }
        let table = &self.structure[&(a.degree, b.degree)];
        let mut out = self.zero::<T>(n)?;
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x.clone() * y.clone();
                for (o, c) in out.coords.iter_mut().zip(&table[i][j]) {
                    if !c.is_zero() {
                        *o = o.clone() + xy.clone() * T::from_q(c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The projector onto primitives along decomposables.
    pub fn projector_c<T: Coeff>(&self, a: &Diagram<T>) -> Result<Diagram<T>> {
        let m = self.c_matrix.get(a.degree).ok_or_else(|| Error::Cap("degree exceeds the built algebra".into()))?;
        let mut out = self.zero::<T>(a.degree)?;
        for (k, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, c) in out.coords.iter_mut().zip(&m[k]) {
                if !c.is_zero() {
                    *o = o.clone() + x.clone() * T::from_q(c);
                }
            }
        }
        Ok(out)
    }

    /// Spanning vectors of the primitive part `span{D(Γ) : Γ primitive}` in degree `n`.
    pub fn primitive_span(&self, n: usize) -> Result<Vec<Vec<Q>>> {
        let b = self.basis(n)?;
        Ok(b.graphs()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.classify() == Classification::Primitive)
            .map(|(i, _)| b.coords_of(i).to_vec())
            .collect())
    }

    /// Spanning vectors of the decomposables in degree `n`.
    pub fn decomposable_span(&self, n: usize) -> Result<Vec<Vec<Q>>> {
        let mut out = Vec::new();
        for p in 1..n {
            for row in &self.structure[&(p, n - p)] {
                out.extend(row.iter().cloned());
            }
        }
        Ok(out)
    }

    fn build_c(&self, n: usize) -> Result<Vec<Vec<Q>>> {
        let dim = self.dim(n)?;
        let pick = |vs: Vec<Vec<Q>>| {
            let mut kept: Vec<Vec<Q>> = Vec::new();
            for v in vs {
                kept.push(v);
                if rank(&kept) < kept.len() {
                    kept.pop();
                }
            }
            kept
        };
        let prim = pick(self.primitive_span(n)?);
        let dec = pick(self.decomposable_span(n)?);
        if prim.len() + dec.len() != dim {
            return Err(Error::Numeric(format!(
                "degree {n}: primitive rank {} + decomposable rank {} != dim {dim}",
                prim.len(),
                dec.len()
            )));
        }
        let cols: Vec<&Vec<Q>> = prim.iter().chain(dec.iter()).collect();
        let m: Vec<Vec<Q>> = (0..dim).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let mut images = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut e = vec![Q::zero(); dim];
            e[k] = q(1);
            let y = solve(&m, &e).ok_or_else(|| Error::Numeric(format!("degree {n}: primitives and decomposables overlap")))?;
            let mut img = vec![Q::zero(); dim];
            for (i, p) in prim.iter().enumerate() {
                for (o, x) in img.iter_mut().zip(p) {
                    *o += &y[i] * x;
                }
            }
            images.push(img);
        }
        Ok(images)
    }

    /// `c(Γ) = Σ_P (−1)^{|P|+1}/|P| · D(P)` over all partitions of `Γ` into parts
    /// from `G³`, for every enumerated `Γ` of degree `n`. Self-negating graphs get 0.
    pub fn partition_c_all(&self, n: usize) -> Result<Vec<Diagram<Q>>> {
        let target = self.basis(n)?;
        let mut out: Vec<Diagram<Q>> = vec![self.zero(n)?; target.graphs().len()];
        for comp in compositions(n) {
            let m = comp.len() as i64;
            let weight = if m % 2 == 1 { Q::new(1.into(), m.into()) } else { Q::new((-1).into(), m.into()) };
            let pools: Vec<&[WilsonGraph]> = comp.iter().map(|&d| self.bases[d].graphs()).collect();
            let mut idx = vec![0usize; comp.len()];
            'tuples: loop {
                let parts: Vec<WilsonGraph> = idx.iter().zip(&pools).map(|(&i, p)| p[i].clone()).collect();
                let mut dp = self.unit::<Q>();
                for p in &parts {
                    dp = self.product(&dp, &self.project(p)?)?;
                }
                if !dp.is_zero() {
                    let tally = shuffle_tally(&parts, false)?;
                    for (gi, g) in target.graphs().iter().enumerate() {
                        if target.symmetry(gi).self_negating() {
                            continue;
                        }
                        let c = marked::count_from_tally(g, &tally)?;
                        if c != 0 {
                            out[gi] = out[gi].add(&dp.scale(&(&weight * q(c))));
                        }
                    }
                }
                for k in (0..idx.len()).rev() {
                    idx[k] += 1;
                    if idx[k] < pools[k].len() {
                        continue 'tuples;
                    }
                    idx[k] = 0;
                }
                break;
            }
        }
        Ok(out)
    }

    pub fn to_json(&self, d: &Diagram<Q>) -> Result<DiagramJson> {
        let labels = self.basis(d.degree)?.labels();
        let coefficients = if d.degree == 0 {
            [("1".to_string(), format_q(&d.coords[0]))].into_iter().filter(|_| !d.coords[0].is_zero()).collect()
        } else {
            labels
                .into_iter()
                .zip(&d.coords)
                .filter(|(_, c)| !c.is_zero())
                .map(|(l, c)| (l, format_q(c)))
                .collect()
        };
        Ok(DiagramJson { degree: d.degree, coefficients })
    }

    pub fn from_json(&self, j: &DiagramJson) -> Result<Diagram<Q>> {
        let mut d = self.zero::<Q>(j.degree)?;
        let labels = if j.degree == 0 { vec!["1".to_string()] } else { self.basis(j.degree)?.labels() };
        for (label, val) in &j.coefficients {
            let k = labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::Input(format!("unknown basis label {label}")))?;
            d.coords[k] = parse_q(val)?;
        }
        Ok(d)
    }
}
