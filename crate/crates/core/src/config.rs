//! Run configuration: everything needed to reproduce a command, as JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::EngineOptions;
use crate::error::{Error, Result};
use crate::integrator::resolve_framing;
use crate::knot::{FramingSpec, KnotEmbedding, KnotFile};

/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "CSKNOT_THREADS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Table,
}

/// Acceptance tolerances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Statistical gates are `|measured − expected| ≤ sigmas · σ`.
    pub sigmas: f64,
    /// Absolute slack added to statistical gates, for estimates with `σ = 0`.
    pub exact_slack: f64,
    /// `|I(Θ)|` of a planar curve.
    pub planar: f64,
    /// Relative agreement of the self-linking quadrature with its oracle.
    pub relative: f64,
    /// Distance of `I(Θ) + τ` from an integer.
    pub integer: f64,
    /// Largest admissible `σ` of `f_Θ`.
    pub anomaly_sigma: f64,
    /// Budget escalation target: `σ ≤ power · max|coefficient|`.
    pub power: f64,
    /// Distance of the single-crossing difference from `±1`.
    pub crossing: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sigmas: 3.0,
            exact_slack: 1e-12,
            planar: 1e-6,
            relative: 1e-3,
            integer: 1e-3,
            anomaly_sigma: 0.05,
            power: 0.02,
            crossing: 1e-3,
        }
    }
}

/// Parameters of one run. Command-line flags override fields read from `--config`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub degree: usize,
    pub order: usize,
    pub samples: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Knot file, or the name of a preset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub knot: Option<String>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Anomaly table JSON; built-in entries are used when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anomaly_table: Option<PathBuf>,
    /// Report the framed invariant `Ẑ` rather than `Z`.
    pub framed: bool,
    pub chunk: u64,
    pub core: f64,
    pub resolution: usize,
    pub max_order: usize,
    pub max_samples: u64,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        let e = EngineOptions::new(200_000, 1);
        RunConfig {
            degree: 2,
            order: 2,
            samples: e.samples,
            seed: e.seed,
            threads: None,
            knot: None,
            format: Format::Json,
            output: None,
            anomaly_table: None,
            framed: true,
            chunk: e.chunk,
            core: e.core,
            resolution: e.resolution,
            max_order: e.max_order,
            max_samples: e.max_samples,
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn engine(&self) -> EngineOptions {
        let mut e = EngineOptions::new(self.samples, self.seed);
        e.chunk = self.chunk;
        e.core = self.core;
        e.resolution = self.resolution;
        e.max_order = self.max_order;
        e.max_samples = self.max_samples;
        e
    }

    /// `threads`, else `CSKNOT_THREADS`, else `None` (all cores).
    pub fn thread_count(&self) -> Result<Option<usize>> {
        if let Some(t) = self.threads {
            return if t == 0 { Err(Error::Input("thread count must be positive".into())) } else { Ok(Some(t)) };
        }
        match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&t| t > 0)
                .map(Some)
                .ok_or_else(|| Error::Input(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
            Err(_) => Ok(None),
        }
    }
}

/// Loads a framed knot from a knot file, or from a preset name when no such
/// file exists. Without a `framing` entry the default framing is used.
pub fn load_knot(arg: &str) -> Result<KnotEmbedding> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Ok(k) = KnotEmbedding::preset(arg) {
            return Ok(k.with_framing(crate::knot::Framing::Default));
        }
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    let file: KnotFile = serde_json::from_str(&text)?;
    let mut k = KnotEmbedding::from_spec(&file.knot)?;
    if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
        k.name = stem.to_string();
    }
    let f = resolve_framing(&k, file.framing.unwrap_or(FramingSpec::Default))?;
    Ok(k.with_framing(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_json_uses_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"order": 1, "tolerances": {"sigmas": 4}}"#).unwrap();
        assert_eq!(c.order, 1);
        assert_eq!(c.samples, RunConfig::default().samples);
        assert_eq!(c.tolerances.sigmas, 4.0);
        assert_eq!(c.tolerances.power, 0.02);
    }

    #[test]
    fn round_trip() {
        let mut c = RunConfig::default();
        c.knot = Some("trefoil".into());
        c.threads = Some(3);
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.engine().samples, c.samples);
    }

    #[test]
    fn explicit_threads_win() {
        let c = RunConfig { threads: Some(2), ..Default::default() };
        assert_eq!(c.thread_count().unwrap(), Some(2));
        let z = RunConfig { threads: Some(0), ..Default::default() };
        assert!(z.thread_count().is_err());
    }

    #[test]
    fn knots_from_presets_and_files() {
        let k = load_knot("trefoil").unwrap();
        assert!(k.framing.is_some());
        assert!(matches!(load_knot("/nonexistent/knot.json"), Err(Error::Io(_))));
        let dir = std::env::temp_dir().join(format!("csknot-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("ring.json");
        std::fs::write(&p, r#"{"type": "circle", "radius": 2.0, "framing": {"type": "twist", "k": 1}}"#).unwrap();
        let k = load_knot(p.to_str().unwrap()).unwrap();
        assert_eq!(k.name, "ring");
        assert_eq!(k.framing, Some(crate::knot::Framing::Twist { k: 1 }));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
