use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::spearman::spearman_rho;
use crate::error::{Error, Result};
use crate::model::{ActivityVectorSeries, SensorPosition};

/// Positions observed in fewer than this fraction of windows are skipped.
pub const DEFAULT_MIN_OBSERVED_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankedEntry {
    pub identity: String,
    /// Best correlation over positions; `None` when every surviving
    /// position had a constant sequence (ranked after all defined scores).
    pub rho: Option<f64>,
    pub position: SensorPosition,
}

/// Candidates for one avatar, best first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankedIdentityList {
    pub avatar: String,
    pub entries: Vec<RankedEntry>,
}

impl RankedIdentityList {
    pub fn top(&self) -> Option<&RankedEntry> {
        self.entries.first()
    }

    pub fn rank_of(&self, identity: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.identity == identity)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Best-position score of one visual/motion pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairScore {
    pub rho: Option<f64>,
    pub position: SensorPosition,
}

/// Maximum Spearman correlation over the six visual positions. Windows
/// unobservable at a position are dropped pairwise; positions observed in
/// less than `min_observed_fraction` of windows are skipped. `None` when
/// every position was skipped.
pub fn score_pair(
    visual: &ActivityVectorSeries,
    motion_magnitudes: &[f64],
    min_observed_fraction: f64,
) -> Result<Option<PairScore>> {
    let n = visual.len();
    if motion_magnitudes.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: motion_magnitudes.len(),
        });
    }
    if n == 0 {
        return Ok(None);
    }
    let mut best: Option<PairScore> = None;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for p in SensorPosition::ALL {
        let seq = visual.position_magnitudes(p).ok_or_else(|| {
            Error::InvalidSeries(format!("`{}` is not a visual series", visual.source_id()))
        })?;
        xs.clear();
        ys.clear();
        for (m, y) in seq.values().iter().zip(motion_magnitudes) {
            if let Some(x) = m.observed() {
                xs.push(x);
                ys.push(*y);
            }
        }
        if (xs.len() as f64) < min_observed_fraction * n as f64 || xs.is_empty() {
            continue;
        }
        let rho = match spearman_rho(&xs, &ys) {
            Ok(r) => Some(r),
            Err(Error::UndefinedCorrelation | Error::InsufficientData) => None,
            Err(e) => return Err(e),
        };
        let better = match (&best, rho) {
            (None, _) => true,
            (Some(b), Some(r)) => b.rho.is_none_or(|br| r > br),
            (Some(_), None) => false,
        };
        if better {
            best = Some(PairScore { rho, position: p });
        }
    }
    Ok(best)
}

/// Descending rho, undefined scores last, ties by ascending identity id.
pub fn ranking_order(a: &RankedEntry, b: &RankedEntry) -> Ordering {
    match (a.rho, b.rho) {
        (Some(x), Some(y)) => y.total_cmp(&x),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
    .then_with(|| a.identity.cmp(&b.identity))
}

/// Ranks candidate motion series against one visual series.
pub fn rank_identities(
    visual: &ActivityVectorSeries,
    candidates: &[&ActivityVectorSeries],
    min_observed_fraction: f64,
) -> Result<RankedIdentityList> {
    let mut entries = Vec::with_capacity(candidates.len());
    for m in candidates {
        let mags = m.motion_magnitudes().ok_or_else(|| {
            Error::InvalidSeries(format!("`{}` is not a motion series", m.source_id()))
        })?;
        if let Some(score) = score_pair(visual, &mags, min_observed_fraction)? {
            entries.push(RankedEntry {
                identity: m.source_id().to_string(),
                rho: score.rho,
                position: score.position,
            });
        }
    }
    if entries.is_empty() {
        return Err(Error::EmptyRanking);
    }
    entries.sort_by(ranking_order);
    Ok(RankedIdentityList {
        avatar: visual.source_id().to_string(),
        entries,
    })
}
