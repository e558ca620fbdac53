use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ActivityLabel, SensorPosition};
use crate::signal::ConfusionMatrix;

const L: usize = ActivityLabel::COUNT;
const P: usize = SensorPosition::COUNT;

/// How motion series are produced from the scripted truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MotionPath {
    /// Labels through `motion_cm`, magnitudes from the latent signal.
    #[default]
    Direct,
    /// Synthesized inertial trace run through the signal pipeline.
    Trace,
}

/// Parameters of a synthetic cohort. Label-indexed tables are in label-code
/// order; position tables in sensor-position order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohortSpec {
    pub num_identities: usize,
    pub n_windows: usize,
    #[serde(default = "default_w")]
    pub w: f64,
    #[serde(default = "uniform_prior")]
    pub activity_prior: [f64; L],
    #[serde(default = "ConfusionMatrix::identity")]
    pub motion_cm: ConfusionMatrix,
    #[serde(default = "ConfusionMatrix::identity")]
    pub visual_cm: ConfusionMatrix,
    #[serde(default = "default_magnitude_base")]
    pub magnitude_base: [f64; L],
    #[serde(default = "default_intensity_range")]
    pub intensity_range: [f64; 2],
    /// Relative noise of the per-window latent magnitude, shared by both
    /// channels of an identity.
    #[serde(default)]
    pub magnitude_noise_sd: f64,
    /// Relative noise added independently per channel and position.
    #[serde(default)]
    pub observation_noise_sd: f64,
    #[serde(default = "full_observability")]
    pub position_observability: [f64; P],
    /// Every identity performs the same script.
    #[serde(default)]
    pub shared_script: bool,
    #[serde(default)]
    pub motion_path: MotionPath,
    #[serde(default)]
    pub seed: u64,
}

fn default_w() -> f64 {
    1.0
}

fn uniform_prior() -> [f64; L] {
    [1.0 / L as f64; L]
}

fn full_observability() -> [f64; P] {
    [1.0; P]
}

fn default_intensity_range() -> [f64; 2] {
    [0.5, 1.5]
}

/// Typical deviation (m/s²) per label at unit intensity.
pub fn default_magnitude_base() -> [f64; L] {
    [0.1, 1.0, 0.5, 1.5, 2.0, 1.2, 4.0, 1.0]
}

impl CohortSpec {
    /// Noiseless cohort with identity channels.
    pub fn new(num_identities: usize, n_windows: usize, seed: u64) -> Self {
        CohortSpec {
            num_identities,
            n_windows,
            w: default_w(),
            activity_prior: uniform_prior(),
            motion_cm: ConfusionMatrix::identity(),
            visual_cm: ConfusionMatrix::identity(),
            magnitude_base: default_magnitude_base(),
            intensity_range: default_intensity_range(),
            magnitude_noise_sd: 0.0,
            observation_noise_sd: 0.0,
            position_observability: full_observability(),
            shared_script: false,
            motion_path: MotionPath::Direct,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_identities == 0 {
            return Err(Error::config("num_identities", "must be at least 1"));
        }
        if self.n_windows == 0 {
            return Err(Error::config("n_windows", "must be at least 1"));
        }
        if !(self.w.is_finite() && self.w > 0.0) {
            return Err(Error::config("w", format!("must be positive, got {}", self.w)));
        }
        if self.activity_prior.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::config("activity_prior", "entries must be non-negative"));
        }
        let sum: f64 = self.activity_prior.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::config("activity_prior", format!("must sum to 1, sums to {sum}")));
        }
        if self.magnitude_base.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(Error::config("magnitude_base", "entries must be positive"));
        }
        let [lo, hi] = self.intensity_range;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(Error::config(
                "intensity_range",
                format!("need 0 < lo ≤ hi, got [{lo}, {hi}]"),
            ));
        }
        for (field, v) in [
            ("magnitude_noise_sd", self.magnitude_noise_sd),
            ("observation_noise_sd", self.observation_noise_sd),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::config(field, format!("must be non-negative, got {v}")));
            }
        }
        if self.position_observability.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::config("position_observability", "entries must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Parses and validates; syntax errors report line and column.
    pub fn from_json(s: &str) -> Result<Self> {
        let spec: CohortSpec = serde_json::from_str(s).map_err(|e| {
            Error::config(
                "cohort spec",
                format!("line {} column {}: {e}", e.line(), e.column()),
            )
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization is infallible")
    }
}

fn matrix_with(diagonal: [f64; L], extra: &[(ActivityLabel, ActivityLabel, f64)]) -> ConfusionMatrix {
    let mut rows = [[0.0; L]; L];
    for (i, row) in rows.iter_mut().enumerate() {
        let moved: f64 = extra.iter().filter(|e| e.0.index() == i).map(|e| e.2).sum();
        let off = (1.0 - diagonal[i] - moved) / (L - 1) as f64;
        for (j, p) in row.iter_mut().enumerate() {
            *p = if i == j { diagonal[i] } else { off };
        }
        for e in extra.iter().filter(|e| e.0.index() == i) {
            row[e.1.index()] += e.2;
        }
    }
    ConfusionMatrix::new(rows).expect("rows are stochastic by construction")
}

/// Motion-side classifier confusion with weak Idle and head-rotation
/// recognition and a marked Idle → Walking error.
pub fn field_like_motion_cm() -> ConfusionMatrix {
    use ActivityLabel::*;
    matrix_with([0.36, 0.80, 0.35, 0.80, 0.90, 0.80, 0.90, 0.70], &[(Idle, Walking, 0.25)])
}

/// Visual-side counterpart of [`field_like_motion_cm`].
pub fn field_like_visual_cm() -> ConfusionMatrix {
    use ActivityLabel::*;
    matrix_with([0.22, 0.75, 0.30, 0.75, 0.90, 0.80, 0.85, 0.65], &[(Idle, Walking, 0.30)])
}
