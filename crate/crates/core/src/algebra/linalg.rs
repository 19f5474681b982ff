//! Exact rational elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse row as `(column, value)` pairs sorted by column, zeros omitted.
pub type SparseRow = Vec<(usize, Q)>;

fn axpy(target: &SparseRow, factor: &Q, src: &SparseRow) -> SparseRow {
    // target - factor * src
    let mut out = Vec::with_capacity(target.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < src.len() {
        let take_t = j >= src.len() || (i < target.len() && target[i].0 < src[j].0);
        let take_s = i >= target.len() || (j < src.len() && src[j].0 < target[i].0);
        if take_t {
            out.push(target[i].clone());
            i += 1;
        } else if take_s {
            out.push((src[j].0, -(factor * &src[j].1)));
            j += 1;
        } else {
            let v = &target[i].1 - factor * &src[j].1;
            if !v.is_zero() {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon form; rows are keyed by their leading column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `row` against the stored rows; returns the remainder.
    pub fn remainder(&self, mut row: SparseRow) -> SparseRow {
        row.retain(|(_, v)| !v.is_zero());
        let mut k = 0;
        while k < row.len() {
            let c = row[k].0;
            if let Some(r) = self.rows.get(&c) {
                let f = row[k].1.clone();
                row = axpy(&row, &f, r);
            } else {
                k += 1;
            }
        }
        row
    }

    /// Adds a row; returns true when it was independent of the stored rows.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.remainder(row);
        if row.is_empty() {
            return false;
        }
        let lead = row[0].1.clone();
        if !lead.is_one() {
            for (_, v) in row.iter_mut() {
                *v = &*v / &lead;
            }
        }
        self.rows.insert(row[0].0, row);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Fully reduced rows: every pivot column is zero in all other rows.
    pub fn reduced(&self) -> BTreeMap<usize, SparseRow> {
        let mut out: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut r = row.clone();
            let mut k = 1;
            while k < r.len() {
                let c = r[k].0;
                if let Some(src) = out.get(&c) {
                    let f = r[k].1.clone();
                    r = axpy(&r, &f, src);
                } else {
                    k += 1;
                }
            }
            out.insert(p, r);
        }
        out
    }
}

/// Solves `m x = b` for a square invertible dense matrix.
pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.iter().zip(b).map(|(row, bi)| {
        let mut r = row.clone();
        r.push(bi.clone());
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().expect("augmented")).collect())
}

/// Rank of a list of dense vectors.
pub fn rank(vectors: &[Vec<Q>]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect());
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_rank_and_reduction() {
        let mut e = Echelon::new();
        assert!(e.insert(vec![(0, q(1)), (1, q(2)), (2, q(3))]));
        assert!(e.insert(vec![(1, q(1)), (2, q(1))]));
        assert!(!e.insert(vec![(0, q(2)), (1, q(5)), (2, q(7))]));
        assert_eq!(e.rank(), 2);
        let red = e.reduced();
        assert_eq!(red[&0], vec![(0, q(1)), (2, q(1))]);
        assert_eq!(red[&1], vec![(1, q(1)), (2, q(1))]);
    }

    #[test]
    fn dense_solve() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve(&m, &[q(3), q(5)]).unwrap();
        assert_eq!(x, vec![q_frac(4, 5), q_frac(7, 5)]);
        assert!(solve(&[vec![q(1), q(1)], vec![q(2), q(2)]], &[q(0), q(0)]).is_none());
    }
}
