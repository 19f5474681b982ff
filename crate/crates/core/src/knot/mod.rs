//! Knot embeddings, framings and singular-knot families.

mod curve;
mod singular;

use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use curve::{bump, Bump, Curve, Deformed, Fourier, FourierTerm, Reparam, Transformed, V3};
pub use singular::{CrossingSpec, SingularKnot};

use crate::error::{Error, Result};

/// Framing relative to the default normal field: `k` extra full twists, each
/// raising the linking number of the knot with its push-off by one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Framing {
    Default,
    Twist { k: i64 },
}

/// Unit normal field used as the base of all framings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormalField {
    /// Principal normal `φ̈ − (φ̈·t)t`, normalized.
    Principal,
    /// Projection of a fixed axis onto the normal plane; used when curvature nearly vanishes.
    Axis([f64; 3]),
}

/// A closed curve in ℝ³ with an optional framing.
#[derive(Clone, Debug)]
pub struct KnotEmbedding {
    curve: Arc<dyn Curve>,
    pub framing: Option<Framing>,
    pub name: String,
    pub spec: Option<KnotSpec>,
    normal: NormalField,
}

/// Knot file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum KnotSpec {
    Torus {
        p: i64,
        q: i64,
        #[serde(rename = "R")]
        big_r: f64,
        r: f64,
    },
    Circle {
        #[serde(default = "one")]
        radius: f64,
    },
    Fourier {
        coeffs: Vec<FourierTerm>,
    },
    Polygon {
        points: Vec<[f64; 3]>,
        smoothing: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// Framing as written in a knot file. `linking` asks for the twist that makes
/// the linking number of the knot with its push-off equal to `lk`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FramingSpec {
    Default,
    Twist { k: i64 },
    Linking { lk: i64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotFile {
    #[serde(flatten)]
    pub knot: KnotSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<FramingSpec>,
}

const MIN_CURVATURE: f64 = 1e-3;
const SAMPLES: usize = 2048;

impl KnotEmbedding {
    /// Wraps a curve after checking regularity and injectivity on a dense sample.
    pub fn new(curve: Arc<dyn Curve>, name: impl Into<String>) -> Result<Self> {
        let mut k = KnotEmbedding { curve, framing: None, name: name.into(), spec: None, normal: NormalField::Principal };
        let speed = k.min_speed(SAMPLES);
        if !(speed > 0.0) {
            return Err(Error::InvalidKnot(format!("{}: velocity vanishes", k.name)));
        }
        let margin = k.injectivity_margin(1024);
        if !(margin > 1e-9) {
            return Err(Error::InvalidKnot(format!("{}: curve is not injective (margin {margin:.3e})", k.name)));
        }
        k.normal = k.choose_normal();
        Ok(k)
    }

    pub fn from_spec(spec: &KnotSpec) -> Result<Self> {
        let (curve, name): (Fourier, String) = match spec {
            KnotSpec::Torus { p, q, big_r, r } => {
                if !(*big_r > 0.0 && *r > 0.0 && r < big_r) {
                    return Err(Error::InvalidKnot("torus knot needs 0 < r < R".into()));
                }
                (Fourier::torus(*p, *q, *big_r, *r), format!("torus({p},{q})"))
            }
            KnotSpec::Circle { radius } => {
                if !(*radius > 0.0) {
                    return Err(Error::InvalidKnot("circle radius must be positive".into()));
                }
                (Fourier::circle(*radius), "circle".into())
            }
            KnotSpec::Fourier { coeffs } => (Fourier::new(coeffs.clone()), "fourier".into()),
            KnotSpec::Polygon { points, smoothing } => (polygon_to_fourier(points, *smoothing)?, "polygon".into()),
        };
        let mut k = Self::new(Arc::new(curve), name)?;
        k.spec = Some(spec.clone());
        Ok(k)
    }

    /// Named presets: `circle` (alias `unknot`), `trefoil`, `mirror-trefoil`, `cinquefoil`.
    pub fn preset(name: &str) -> Result<Self> {
        let spec = match name {
            "circle" | "unknot" => KnotSpec::Circle { radius: 1.0 },
            "trefoil" => KnotSpec::Torus { p: 2, q: 3, big_r: 2.0, r: 0.5 },
            "mirror-trefoil" => return Ok(Self::preset("trefoil")?.mirror()),
            "cinquefoil" => KnotSpec::Torus { p: 2, q: 5, big_r: 2.0, r: 0.5 },
            _ => return Err(Error::InvalidKnot(format!("unknown preset {name:?}"))),
        };
        Self::from_spec(&spec)
    }

    pub fn torus(p: i64, q: i64, big_r: f64, r: f64) -> Result<Self> {
        Self::from_spec(&KnotSpec::Torus { p, q, big_r, r })
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::from_spec(&KnotSpec::Circle { radius })
    }

    pub fn with_framing(mut self, f: Framing) -> Self {
        self.framing = Some(f);
        self
    }

    pub fn curve(&self) -> &Arc<dyn Curve> {
        &self.curve
    }

    pub fn point(&self, s: f64) -> V3 {
        self.curve.point(s)
    }

    pub fn d1(&self, s: f64) -> V3 {
        self.curve.d1(s)
    }

    pub fn d2(&self, s: f64) -> V3 {
        self.curve.d2(s)
    }

    pub fn tangent(&self, s: f64) -> V3 {
        self.d1(s).normalize()
    }

    fn derived(&self, curve: Arc<dyn Curve>, name: String, framing: Option<Framing>) -> Result<Self> {
        let mut k = Self::new(curve, name)?;
        k.framing = framing;
        Ok(k)
    }

    /// `φ* = −φ`. Twists change handedness.
    pub fn mirror(&self) -> Self {
        let c = Arc::new(Transformed { inner: self.curve.clone(), mirror: true, reverse: false });
        let f = self.framing.map(|f| match f {
            Framing::Twist { k } => Framing::Twist { k: -k },
            other => other,
        });
        let mut k = self.derived(c, format!("mirror({})", self.name), f).expect("mirror of an embedding");
        k.normal = match self.normal {
            NormalField::Axis(a) => NormalField::Axis([-a[0], -a[1], -a[2]]),
            n => n,
        };
        k
    }

    /// `φ̄(s) = φ(1 − s)`.
    pub fn reverse(&self) -> Self {
        let c = Arc::new(Transformed { inner: self.curve.clone(), mirror: false, reverse: true });
        let mut k = self.derived(c, format!("reverse({})", self.name), self.framing).expect("reversal of an embedding");
        k.normal = self.normal;
        k
    }

    /// `φ ∘ ρ` for `ρ(s) = s + shift + a sin(2πms)/(2πm)`.
    pub fn reparametrize(&self, shift: f64, amplitude: f64, mode: u32) -> Result<Self> {
        if amplitude.abs() >= 1.0 || mode == 0 {
            return Err(Error::InvalidKnot("reparametrization must be a diffeomorphism".into()));
        }
        let c = Arc::new(Reparam { inner: self.curve.clone(), shift, amplitude, mode });
        self.derived(c, format!("reparam({})", self.name), self.framing)
    }

    /// Adds localized bump displacements.
    pub fn deform(&self, bumps: Vec<Bump>) -> Result<Self> {
        let c = Arc::new(Deformed { inner: self.curve.clone(), bumps });
        self.derived(c, format!("deformed({})", self.name), self.framing)
    }

    pub fn normal_field(&self) -> NormalField {
        self.normal
    }

    fn choose_normal(&self) -> NormalField {
        let diam = self.diameter();
        let curved = (0..SAMPLES).all(|i| {
            let s = (i as f64 + 0.5) / SAMPLES as f64;
            let v = self.d1(s);
            let kappa = v.cross(&self.d2(s)).norm() / v.norm().powi(3);
            kappa * diam > MIN_CURVATURE
        });
        if curved {
            return NormalField::Principal;
        }
        let mut candidates = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let r3 = 1.0 / 3f64.sqrt();
        for sx in [1.0, -1.0] {
            for sy in [1.0, -1.0] {
                candidates.push([r3 * sx, r3 * sy, r3]);
            }
        }
        let score = |a: &[f64; 3]| {
            let a = V3::from(*a);
            (0..SAMPLES)
                .map(|i| self.tangent((i as f64 + 0.5) / SAMPLES as f64).cross(&a).norm())
                .fold(f64::INFINITY, f64::min)
        };
        let best = candidates
            .into_iter()
            .max_by(|a, b| score(a).partial_cmp(&score(b)).expect("finite"))
            .expect("candidates");
        NormalField::Axis(best)
    }

    /// Base unit normal at `s` before twisting.
    pub fn base_normal(&self, s: f64) -> V3 {
        let t = self.tangent(s);
        let v = match self.normal {
            NormalField::Principal => self.d2(s),
            NormalField::Axis(a) => V3::from(a),
        };
        (v - t * v.dot(&t)).normalize()
    }

    /// The framing vector `ν(s)`; the default framing when none is set.
    pub fn frame(&self, s: f64) -> V3 {
        let n = self.base_normal(s);
        match self.framing.unwrap_or(Framing::Default) {
            Framing::Default => n,
            Framing::Twist { k } => {
                let t = self.tangent(s);
                let (sn, cs) = (TAU * k as f64 * s).sin_cos();
                n * cs - t.cross(&n) * sn
            }
        }
    }

    pub fn min_speed(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|i| self.d1(i as f64 / samples as f64).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn diameter(&self) -> f64 {
        let pts: Vec<V3> = (0..256).map(|i| self.point(i as f64 / 256.0)).collect();
        let mut d: f64 = 0.0;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                d = d.max((pts[i] - pts[j]).norm());
            }
        }
        d
    }

    pub fn centroid(&self) -> V3 {
        let n = 512;
        (0..n).map(|i| self.point(i as f64 / n as f64)).sum::<V3>() / n as f64
    }

    /// `min |φ(s_i) − φ(s_j)| / diameter` over sample pairs at parameter
    /// distance at least `2/samples`, compared against the chord length the
    /// local speed predicts. Positive for embeddings.
    pub fn injectivity_margin(&self, samples: usize) -> f64 {
        let pts: Vec<V3> = (0..samples).map(|i| self.point(i as f64 / samples as f64)).collect();
        let speeds: Vec<f64> = (0..samples).map(|i| self.d1(i as f64 / samples as f64).norm()).collect();
        let max_speed = speeds.iter().cloned().fold(0.0, f64::max);
        let diam = self.diameter();
        let mut margin = f64::INFINITY;
        let window = (samples / 8).max(2);
        for i in 0..samples {
            for j in (i + 1)..samples {
                let gap = (j - i).min(samples - (j - i));
                let dist = (pts[i] - pts[j]).norm();
                if gap <= window {
                    // nearby parameters: the chord must not collapse relative to arc length
                    let arc = gap as f64 / samples as f64 * max_speed;
                    margin = margin.min(dist / arc * 0.25);
                } else {
                    margin = margin.min(dist / diam);
                }
            }
        }
        margin
    }
}

/// Closed polygon → truncated Fourier series of its arc-length
/// parametrization mollified by a periodic Gaussian of width `smoothing`
/// (as a fraction of the total length).
pub fn polygon_to_fourier(points: &[[f64; 3]], smoothing: f64) -> Result<Fourier> {
    if points.len() < 3 {
        return Err(Error::InvalidKnot("polygon needs at least three points".into()));
    }
    if !(smoothing > 0.0 && smoothing < 0.5) {
        return Err(Error::InvalidKnot("smoothing must lie in (0, 0.5)".into()));
    }
    let pts: Vec<V3> = points.iter().map(|p| V3::from(*p)).collect();
    let n = pts.len();
    let mut cum = vec![0.0];
    for i in 0..n {
        let l = (pts[(i + 1) % n] - pts[i]).norm();
        if l == 0.0 {
            return Err(Error::InvalidKnot("polygon has repeated consecutive points".into()));
        }
        cum.push(cum[i] + l);
    }
    let total = cum[n];
    let m = 2048;
    let mut samples = Vec::with_capacity(m);
    let mut seg = 0;
    for j in 0..m {
        let a = j as f64 / m as f64 * total;
        while cum[seg + 1] < a {
            seg += 1;
        }
        let f = (a - cum[seg]) / (cum[seg + 1] - cum[seg]);
        samples.push(pts[seg] * (1.0 - f) + pts[(seg + 1) % n] * f);
    }
    let kmax = ((1.2 / smoothing).ceil() as usize).min(m / 2 - 1);
    let mut terms = Vec::new();
    for k in 0..=kmax {
        let damp = (-(TAU * k as f64 * smoothing).powi(2) / 2.0).exp();
        let mut c = V3::zeros();
        let mut s = V3::zeros();
        for (j, p) in samples.iter().enumerate() {
            let (sn, cs) = (TAU * k as f64 * j as f64 / m as f64).sin_cos();
            c += p * cs;
            s += p * sn;
        }
        let norm = if k == 0 { 1.0 / m as f64 } else { 2.0 / m as f64 };
        c *= norm * damp;
        s *= norm * damp;
        terms.push(FourierTerm { k: k as u32, cos: [c.x, c.y, c.z], sin: [s.x, s.y, s.z] });
    }
    Ok(Fourier::new(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_embeddings() {
        for name in ["circle", "trefoil", "mirror-trefoil", "cinquefoil"] {
            let k = KnotEmbedding::preset(name).unwrap();
            assert!(k.injectivity_margin(2000) > 0.0);
            assert!(k.min_speed(10_000) > 0.0);
        }
        assert!(KnotEmbedding::preset("granny").is_err());
        assert!(KnotEmbedding::torus(2, 3, 1.0, 2.0).is_err());
    }

    #[test]
    fn involutions() {
        let k = KnotEmbedding::preset("trefoil").unwrap();
        let mm = k.mirror().mirror();
        let rr = k.reverse().reverse();
        for i in 0..50 {
            let s = i as f64 / 50.0;
            assert!((mm.point(s) - k.point(s)).norm() < 1e-14);
            assert!((rr.point(s) - k.point(s)).norm() < 1e-14);
        }
        let c = KnotEmbedding::circle(1.0).unwrap().mirror();
        assert!((c.point(0.25) - V3::new(0.0, -1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn frame_is_normal() {
        let k = KnotEmbedding::preset("trefoil").unwrap().with_framing(Framing::Twist { k: 3 });
        for i in 0..100 {
            let s = i as f64 / 100.0;
            let f = k.frame(s);
            assert!((f.norm() - 1.0).abs() < 1e-12);
            assert!(f.dot(&k.tangent(s)).abs() < 1e-12);
        }
    }

    #[test]
    fn straightish_curve_uses_axis_fallback() {
        // planar curve whose signed curvature changes sign
        let terms = vec![
            FourierTerm { k: 1, cos: [1.0, 0.0, 0.0], sin: [0.0, 1.0, 0.0] },
            FourierTerm { k: 2, cos: [0.0, 0.3, 0.0], sin: [0.0, 0.0, 0.0] },
        ];
        let k = KnotEmbedding::from_spec(&KnotSpec::Fourier { coeffs: terms }).unwrap();
        let min_cross = (0..4096)
            .map(|i| {
                let s = i as f64 / 4096.0;
                k.tangent(s).cross(&k.frame(s)).norm()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(min_cross > 0.99);
        assert!(matches!(k.normal_field(), NormalField::Axis(_)));
    }

    #[test]
    fn polygon_smoothing() {
        let sq = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.1], [-1.0, 0.0, 0.0], [0.0, -1.0, -0.1]];
        let k = KnotEmbedding::from_spec(&KnotSpec::Polygon { points: sq, smoothing: 0.05 }).unwrap();
        assert!(k.injectivity_margin(1000) > 0.0);
        assert!((k.point(0.0) - V3::new(1.0, 0.0, 0.0)).norm() < 0.2);
    }

    #[test]
    fn knot_file_json() {
        let j = r#"{"type":"torus","p":2,"q":3,"R":2.0,"r":0.5,"framing":{"type":"twist","k":2}}"#;
        let f: KnotFile = serde_json::from_str(j).unwrap();
        assert_eq!(f.knot, KnotSpec::Torus { p: 2, q: 3, big_r: 2.0, r: 0.5 });
        assert_eq!(f.framing, Some(FramingSpec::Twist { k: 2 }));
        let back: KnotFile = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
