//! Truncated power series in ħ with diagram coefficients.

use super::linalg::{q, Q};
use super::{Algebra, Coeff, Diagram};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DiagramSeries<T = Q> {
    /// `coeffs[k]` has degree `k`; `coeffs[0]` is a scalar.
    pub coeffs: Vec<Diagram<T>>,
}

impl<T: Coeff> DiagramSeries<T> {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn zero(alg: &Algebra, order: usize) -> Result<Self> {
        Ok(DiagramSeries { coeffs: (0..=order).map(|k| alg.zero(k)).collect::<Result<_>>()? })
    }

    pub fn one(alg: &Algebra, order: usize) -> Result<Self> {
        let mut s = Self::zero(alg, order)?;
        s.coeffs[0].coords[0] = T::one();
        Ok(s)
    }

    pub fn constant(&self) -> &T {
        &self.coeffs[0].coords[0]
    }

    pub fn add(&self, other: &Self) -> Self {
        DiagramSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        DiagramSeries { coeffs: self.coeffs.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn mul(&self, alg: &Algebra, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        let mut out = Self::zero(alg, n)?;
        for i in 0..=n {
            for j in 0..=(n - i) {
                let p = alg.product(&self.coeffs[i], &other.coeffs[j])?;
                out.coeffs[i + j] = out.coeffs[i + j].add(&p);
            }
        }
        Ok(out)
    }

    /// `log s` for `s` with constant term 1.
    pub fn log(&self, alg: &Algebra) -> Result<Self> {
        if *self.constant() != T::one() {
            return Err(Error::Contract("log needs a series with constant term 1".into()));
        }
        let mut x = self.clone();
        x.coeffs[0].coords[0] = T::zero();
        let mut out = Self::zero(alg, self.order())?;
        let mut power = x.clone();
        for m in 1..=self.order() {
            let c = if m % 2 == 1 { Q::new(1.into(), (m as i64).into()) } else { Q::new((-1).into(), (m as i64).into()) };
            out = out.add(&power.scale(&T::from_q(&c)));
            power = power.mul(alg, &x)?;
        }
        Ok(out)
    }

    /// `exp s` for `s` with constant term 0.
    pub fn exp(&self, alg: &Algebra) -> Result<Self> {
        if !self.constant().is_zero() {
            return Err(Error::Contract("exp needs a series with zero constant term".into()));
        }
        let mut out = Self::one(alg, self.order())?;
        let mut power = Self::one(alg, self.order())?;
        let mut fact = q(1);
        for m in 1..=self.order() {
            power = power.mul(alg, self)?;
            fact *= q(m as i64);
            out = out.add(&power.scale(&T::from_q(&(q(1) / &fact))));
        }
        Ok(out)
    }
}

impl DiagramSeries<Q> {
    pub fn to_f64(&self) -> DiagramSeries<f64> {
        DiagramSeries { coeffs: self.coeffs.iter().map(|d| d.to_f64()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WilsonGraph;
    use num_traits::Zero;

    #[test]
    fn log_one_is_zero() {
        let alg = Algebra::new(3).unwrap();
        let one = DiagramSeries::<Q>::one(&alg, 3).unwrap();
        let l = one.log(&alg).unwrap();
        assert!(l.coeffs.iter().all(|d| d.is_zero()));
    }

    #[test]
    fn exp_log_round_trip() {
        let alg = Algebra::new(3).unwrap();
        let mut s = DiagramSeries::<Q>::one(&alg, 3).unwrap();
        s.coeffs[1] = alg.project(&WilsonGraph::theta()).unwrap().scale(&super::super::linalg::q_frac(1, 2));
        s.coeffs[2] = alg.project(&WilsonGraph::y_graph()).unwrap().scale(&q(3));
        s.coeffs[3] = alg.project(&WilsonGraph::wheel(3).unwrap()).unwrap();
        let back = s.log(&alg).unwrap().exp(&alg).unwrap();
        assert_eq!(back, s);
        assert!(s.exp(&alg).is_err());
        let mut z = s.clone();
        z.coeffs[0].coords[0] = Q::zero();
        assert!(z.log(&alg).is_err());
    }
}
