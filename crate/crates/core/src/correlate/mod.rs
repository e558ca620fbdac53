//! Activity-based filtering followed by magnitude-based identity ranking.

pub mod filter;
pub mod hamming;
pub mod rank;
pub mod spearman;

use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use filter::{activity_filter, check_uniform, Candidate, CandidatePairSet, FilterConfig};
pub use hamming::{hamming_distance, mismatch_budget, Hamming, LabelSet};
pub use rank::{
    rank_identities, ranking_order, score_pair, PairScore, RankedEntry, RankedIdentityList,
    DEFAULT_MIN_OBSERVED_FRACTION,
};
pub use spearman::{fractional_ranks, spearman_rho};

use crate::error::{Error, Result};
use crate::model::{ActivityVectorSeries, Dataset};

/// Format version of ranking JSON-Lines output.
pub const RANKING_FORMAT_VERSION: &str = "rankings-jsonl/1";

/// Per-avatar result category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// True identity ranked first.
    Correct,
    /// Some other identity ranked first.
    Incorrect,
    /// Every candidate was filtered out.
    None,
}

impl Outcome {
    pub fn of(list: &RankedIdentityList, truth: &str) -> Outcome {
        match list.top() {
            None => Outcome::None,
            Some(e) if e.identity == truth => Outcome::Correct,
            Some(_) => Outcome::Incorrect,
        }
    }
}

/// Ranks each avatar's filtered candidates. Avatars left without any
/// rankable candidate get an empty list.
pub fn rank_candidates(
    visual: &Dataset,
    motion: &Dataset,
    pairs: &CandidatePairSet,
    min_observed_fraction: f64,
) -> Result<Vec<RankedIdentityList>> {
    if pairs.per_avatar.len() != visual.len() {
        return Err(Error::LengthMismatch {
            expected: visual.len(),
            found: pairs.per_avatar.len(),
        });
    }
    visual
        .series()
        .par_iter()
        .zip(&pairs.per_avatar)
        .map(|(v, cands)| {
            let series: Vec<&ActivityVectorSeries> = cands
                .iter()
                .map(|c| &motion.series()[c.identity])
                .collect();
            match rank_identities(v, &series, min_observed_fraction) {
                Ok(list) => Ok(list),
                Err(Error::EmptyRanking) => Ok(RankedIdentityList {
                    avatar: v.source_id().to_string(),
                    entries: Vec::new(),
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Filter-then-rank over whole datasets, one list per avatar in `V` order.
pub fn correlate(
    visual: &Dataset,
    motion: &Dataset,
    cfg: &FilterConfig,
    min_observed_fraction: f64,
) -> Result<Vec<RankedIdentityList>> {
    let pairs = activity_filter(visual, motion, cfg)?;
    rank_candidates(visual, motion, &pairs, min_observed_fraction)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RankingRecord {
    avatar: String,
    ranking: Vec<RankedEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outcome: Option<Outcome>,
}

/// One JSON object per avatar; `outcomes`, when given, must align with `lists`.
pub fn write_rankings_jsonl<W: Write>(
    mut writer: W,
    lists: &[RankedIdentityList],
    outcomes: Option<&[Outcome]>,
) -> Result<()> {
    for (i, list) in lists.iter().enumerate() {
        let record = RankingRecord {
            avatar: list.avatar.clone(),
            ranking: list.entries.clone(),
            outcome: outcomes.map(|o| o[i]),
        };
        serde_json::to_writer(&mut writer, &record)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_rankings_jsonl<R: BufRead>(reader: R) -> Result<Vec<RankedIdentityList>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RankingRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(RankedIdentityList {
            avatar: rec.avatar,
            entries: rec.ranking,
        });
    }
    Ok(out)
}
