use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hamming::{hamming_distance, mismatch_budget, LabelSet};
use crate::error::{Error, Result};
use crate::model::{ActivityLabel, Dataset};

/// Activity-filter parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    /// Normalised mismatch threshold in `[0, 1]`.
    pub t_norm: f64,
    /// Only these labels take part in the distance.
    #[serde(default)]
    pub restricted_set: Option<LabelSet>,
    /// Absolute budget replacing `floor(t_norm · n_effective)` when set.
    #[serde(default)]
    pub budget_override: Option<usize>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            t_norm: 0.30,
            restricted_set: None,
            budget_override: None,
        }
    }
}

impl FilterConfig {
    pub fn with_t_norm(t_norm: f64) -> Self {
        FilterConfig {
            t_norm,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.t_norm) {
            return Err(Error::config("t_norm", format!("must lie in [0, 1], got {}", self.t_norm)));
        }
        if self.restricted_set.is_some_and(|s| s.is_empty()) {
            return Err(Error::config("restricted_set", "must not be empty"));
        }
        Ok(())
    }

    pub fn budget(&self, n_effective: usize) -> usize {
        self.budget_override
            .unwrap_or_else(|| mismatch_budget(self.t_norm, n_effective))
    }

    /// Whether a pair of label sequences passes the filter; `Some(distance)`
    /// when it does.
    pub fn admits(&self, a: &[ActivityLabel], b: &[ActivityLabel]) -> Result<Option<usize>> {
        let h = hamming_distance(a, b, self.restricted_set)?;
        Ok((h.distance <= self.budget(h.effective_len)).then_some(h.distance))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate {
    /// Index into the motion dataset.
    pub identity: usize,
    pub distance: usize,
}

/// Filter output: for every avatar (by index into `V`), the motion
/// identities that passed, in ascending identity order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CandidatePairSet {
    pub per_avatar: Vec<Vec<Candidate>>,
}

impl CandidatePairSet {
    pub fn pair_count(&self) -> usize {
        self.per_avatar.iter().map(Vec::len).sum()
    }

    pub fn candidates(&self, avatar: usize) -> &[Candidate] {
        &self.per_avatar[avatar]
    }
}

/// Checks that both datasets share one sequence length and window length.
pub fn check_uniform(visual: &Dataset, motion: &Dataset) -> Result<Option<usize>> {
    let mut n = None;
    for s in visual.series().iter().chain(motion.series()) {
        match n {
            None => n = Some(s.len()),
            Some(k) if k != s.len() => {
                return Err(Error::LengthMismatch {
                    expected: k,
                    found: s.len(),
                })
            }
            _ => {}
        }
    }
    if let (Some(a), Some(b)) = (visual.window_seconds(), motion.window_seconds()) {
        if a != b {
            return Err(Error::InvalidDataset(format!(
                "visual w={a} differs from motion w={b}"
            )));
        }
    }
    Ok(n)
}

/// All-pairs activity filter, `O(p·q·n)`.
pub fn activity_filter(visual: &Dataset, motion: &Dataset, cfg: &FilterConfig) -> Result<CandidatePairSet> {
    cfg.validate()?;
    check_uniform(visual, motion)?;
    let per_avatar = visual
        .series()
        .par_iter()
        .map(|v| {
            let mut out = Vec::new();
            for (j, m) in motion.series().iter().enumerate() {
                if let Some(distance) = cfg.admits(v.activities(), m.activities())? {
                    out.push(Candidate { identity: j, distance });
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CandidatePairSet { per_avatar })
}
