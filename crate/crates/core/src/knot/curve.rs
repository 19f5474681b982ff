//! Smooth closed curves `φ : [0,1) → ℝ³` with analytic first and second derivatives.

use std::f64::consts::TAU;
use std::fmt::Debug;
use std::sync::Arc;

use nalgebra::Vector3;

pub type V3 = Vector3<f64>;

pub trait Curve: Debug + Send + Sync {
    fn point(&self, s: f64) -> V3;
    fn d1(&self, s: f64) -> V3;
    fn d2(&self, s: f64) -> V3;
}

/// `a₀ + Σ_k a_k cos(2πks) + b_k sin(2πks)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Fourier {
    pub terms: Vec<FourierTerm>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FourierTerm {
    pub k: u32,
    pub cos: [f64; 3],
    pub sin: [f64; 3],
}

impl Fourier {
    pub fn new(mut terms: Vec<FourierTerm>) -> Self {
        terms.sort_by_key(|t| t.k);
        let mut merged: Vec<FourierTerm> = Vec::new();
        for t in terms {
            match merged.last_mut() {
                Some(m) if m.k == t.k => {
                    for i in 0..3 {
                        m.cos[i] += t.cos[i];
                        m.sin[i] += t.sin[i];
                    }
                }
                _ => merged.push(t),
            }
        }
        Fourier { terms: merged }
    }

    /// Adds `c cos(mθ) + s sin(mθ)` for a possibly negative frequency `m`.
    fn push_signed(terms: &mut Vec<FourierTerm>, m: i64, c: [f64; 3], s: [f64; 3]) {
        let sg = if m < 0 { -1.0 } else { 1.0 };
        terms.push(FourierTerm { k: m.unsigned_abs() as u32, cos: c, sin: [sg * s[0], sg * s[1], sg * s[2]] });
    }

    pub fn circle(radius: f64) -> Self {
        Fourier::new(vec![FourierTerm { k: 1, cos: [radius, 0.0, 0.0], sin: [0.0, radius, 0.0] }])
    }

    /// `((R + r cos qθ) cos pθ, (R + r cos qθ) sin pθ, r sin qθ)` with `θ = 2πs`.
    pub fn torus(p: i64, q: i64, big_r: f64, r: f64) -> Self {
        let mut t = Vec::new();
        Self::push_signed(&mut t, p, [big_r, 0.0, 0.0], [0.0, big_r, 0.0]);
        let h = r / 2.0;
        Self::push_signed(&mut t, p + q, [h, 0.0, 0.0], [0.0, h, 0.0]);
        Self::push_signed(&mut t, p - q, [h, 0.0, 0.0], [0.0, h, 0.0]);
        Self::push_signed(&mut t, q, [0.0; 3], [0.0, 0.0, r]);
        Fourier::new(t)
    }

    fn eval(&self, s: f64, order: u32) -> V3 {
        let mut out = V3::zeros();
        for t in &self.terms {
            let w = TAU * t.k as f64;
            let (sn, cs) = (w * s).sin_cos();
            let (a, b) = match order % 4 {
                0 => (cs, sn),
                1 => (-sn, cs),
                2 => (-cs, -sn),
                _ => (sn, -cs),
            };
            let scale = w.powi(order as i32);
            if order > 0 && t.k == 0 {
                continue;
            }
            out += V3::from(t.cos) * (a * scale) + V3::from(t.sin) * (b * scale);
        }
        out
    }
}

impl Curve for Fourier {
    fn point(&self, s: f64) -> V3 {
        self.eval(s, 0)
    }
    fn d1(&self, s: f64) -> V3 {
        self.eval(s, 1)
    }
    fn d2(&self, s: f64) -> V3 {
        self.eval(s, 2)
    }
}

/// `φ ∘ ρ` with the circle diffeomorphism `ρ(s) = s + shift + a sin(2πms)/(2πm)`, `|a| < 1`.
#[derive(Clone, Debug)]
pub struct Reparam {
    pub inner: Arc<dyn Curve>,
    pub shift: f64,
    pub amplitude: f64,
    pub mode: u32,
}

impl Reparam {
    fn rho(&self, s: f64) -> (f64, f64, f64) {
        let w = TAU * self.mode as f64;
        let r = s + self.shift + self.amplitude * (w * s).sin() / w;
        let r1 = 1.0 + self.amplitude * (w * s).cos();
        let r2 = -self.amplitude * w * (w * s).sin();
        (r.rem_euclid(1.0), r1, r2)
    }
}

impl Curve for Reparam {
    fn point(&self, s: f64) -> V3 {
        self.inner.point(self.rho(s).0)
    }
    fn d1(&self, s: f64) -> V3 {
        let (r, r1, _) = self.rho(s);
        self.inner.d1(r) * r1
    }
    fn d2(&self, s: f64) -> V3 {
        let (r, r1, r2) = self.rho(s);
        self.inner.d2(r) * (r1 * r1) + self.inner.d1(r) * r2
    }
}

/// Smooth bump `exp(1 − 1/(1 − x²))` in `x = d/w`, `d` the periodic distance of
/// `s` from `center`; supported on `|d| < w`. Returns value and two derivatives in `s`.
pub fn bump(s: f64, center: f64, width: f64) -> (f64, f64, f64) {
    let d = (s - center + 0.5).rem_euclid(1.0) - 0.5;
    let x = d / width;
    if x.abs() >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let u = 1.0 - x * x;
    let f = (1.0 - 1.0 / u).exp();
    let g1 = -2.0 * x / (u * u);
    let g2 = -2.0 / (u * u) - 8.0 * x * x / (u * u * u);
    let dx = 1.0 / width;
    (f, f * g1 * dx, f * (g1 * g1 + g2) * dx * dx)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
    pub displacement: [f64; 3],
}

/// `φ(s) + Σ bump_i(s) v_i`: displacement confined to the bump supports.
#[derive(Clone, Debug)]
pub struct Deformed {
    pub inner: Arc<dyn Curve>,
    pub bumps: Vec<Bump>,
}

impl Deformed {
    fn extra(&self, s: f64, order: usize) -> V3 {
        let mut out = V3::zeros();
        for b in &self.bumps {
            let v = bump(s, b.center, b.width);
            let c = [v.0, v.1, v.2][order];
            out += V3::from(b.displacement) * c;
        }
        out
    }
}

impl Curve for Deformed {
    fn point(&self, s: f64) -> V3 {
        self.inner.point(s) + self.extra(s, 0)
    }
    fn d1(&self, s: f64) -> V3 {
        self.inner.d1(s) + self.extra(s, 1)
    }
    fn d2(&self, s: f64) -> V3 {
        self.inner.d2(s) + self.extra(s, 2)
    }
}

/// Mirror image `−φ` and/or reversal `φ(1 − s)`.
#[derive(Clone, Debug)]
pub struct Transformed {
    pub inner: Arc<dyn Curve>,
    pub mirror: bool,
    pub reverse: bool,
}

impl Transformed {
    fn arg(&self, s: f64) -> f64 {
        if self.reverse {
            (1.0 - s).rem_euclid(1.0)
        } else {
            s
        }
    }
    fn sign(&self, order: u32) -> f64 {
        let m = if self.mirror { -1.0 } else { 1.0 };
        let r = if self.reverse && order % 2 == 1 { -1.0 } else { 1.0 };
        m * r
    }
}

impl Curve for Transformed {
    fn point(&self, s: f64) -> V3 {
        self.inner.point(self.arg(s)) * self.sign(0)
    }
    fn d1(&self, s: f64) -> V3 {
        self.inner.d1(self.arg(s)) * self.sign(1)
    }
    fn d2(&self, s: f64) -> V3 {
        self.inner.d2(self.arg(s)) * self.sign(2)
    }
}
