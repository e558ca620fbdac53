use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use kinelink::align::{AlignmentConfig, OffsetScope};
use kinelink::correlate::DEFAULT_MIN_OBSERVED_FRACTION;
use kinelink::signal::trace::DEFAULT_SAMPLE_INTERVAL;
use kinelink::signal::SavGolConfig;
use kinelink::{Error, LabelSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum IndexMode {
    #[default]
    Naive,
    Indexed,
}

/// Settings for `correlate`, loaded from JSON and overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub w: f64,
    pub t_norm: f64,
    /// Compare only the reduced label set (no Idle, no HeadRotation).
    pub restricted: bool,
    pub index_mode: IndexMode,
    pub min_observed_fraction: f64,
    pub alignment: Option<AlignmentConfig>,
    pub offset_scope: OffsetScope,
    pub sample_interval: f64,
    pub smoothing: SavGolConfig,
    pub seed: u64,
    pub visual: Option<PathBuf>,
    pub motion: Option<PathBuf>,
    /// Directory of `<identity>.csv` inertial traces, used instead of `motion`.
    pub motion_traces: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            w: 1.0,
            t_norm: 0.30,
            restricted: false,
            index_mode: IndexMode::Naive,
            min_observed_fraction: DEFAULT_MIN_OBSERVED_FRACTION,
            alignment: None,
            offset_scope: OffsetScope::PerPair,
            sample_interval: DEFAULT_SAMPLE_INTERVAL,
            smoothing: SavGolConfig::default(),
            seed: 0,
            visual: None,
            motion: None,
            motion_traces: None,
            model: None,
            truth: None,
            out: None,
            report: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(s)
            .map_err(|e| Error::config("run config", format!("line {} column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w.is_finite() && self.w > 0.0) {
            return Err(Error::config("w", format!("must be positive, got {}", self.w)));
        }
        if !(0.0..=1.0).contains(&self.t_norm) {
            return Err(Error::config("t_norm", format!("must lie in [0, 1], got {}", self.t_norm)));
        }
        if !(self.min_observed_fraction > 0.0 && self.min_observed_fraction <= 1.0) {
            return Err(Error::config(
                "min_observed_fraction",
                format!("must lie in (0, 1], got {}", self.min_observed_fraction),
            ));
        }
        if !(self.sample_interval.is_finite() && self.sample_interval > 0.0) {
            return Err(Error::config("sample_interval", "must be positive"));
        }
        self.smoothing
            .validate()
            .map_err(|e| Error::config("smoothing", e.to_string()))?;
        if let Some(a) = &self.alignment {
            a.validate().map_err(|e| Error::config("alignment", e.to_string()))?;
            if self.motion_traces.is_none() {
                return Err(Error::config("alignment", "offset search needs motion_traces"));
            }
        }
        if self.motion_traces.is_some() && self.index_mode == IndexMode::Indexed {
            return Err(Error::config("index_mode", "aligned correlation filters pairwise; use naive"));
        }
        if self.restricted && self.index_mode == IndexMode::Indexed {
            return Err(Error::config("index_mode", "the wildcard index does not support a restricted label set"));
        }
        Ok(())
    }

    pub fn restricted_set(&self) -> Option<LabelSet> {
        self.restricted.then(LabelSet::reduced)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization is infallible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!((cfg.w, cfg.t_norm), (1.0, 0.30));
        let cfg = RunConfig::from_json(r#"{"t_norm": 0.5, "index_mode": "indexed"}"#).unwrap();
        assert_eq!(cfg.index_mode, IndexMode::Indexed);
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn diagnostics_name_the_problem() {
        let e = RunConfig::from_json("{\n  \"t_norm\": 2\n}").unwrap_err();
        assert!(e.to_string().contains("t_norm"), "{e}");
        let e = RunConfig::from_json("{\n  \"tnorm\": 0.2\n}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = RunConfig::from_json(r#"{"restricted": true, "index_mode": "indexed"}"#).unwrap_err();
        assert!(e.to_string().contains("index_mode"));
        let e = RunConfig::from_json(r#"{"alignment": {"delta_max": 5, "step": 0.5}}"#).unwrap_err();
        assert!(e.to_string().contains("alignment"));
    }
}
