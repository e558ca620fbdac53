use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::correlate::{LabelSet, Outcome, RankedIdentityList};
use crate::error::{Error, Result};
use crate::synth::GroundTruth;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvatarOutcome {
    pub avatar: String,
    pub identity: String,
    pub outcome: Outcome,
    /// 1-based rank of the true identity, if it was ranked at all.
    pub rank: Option<usize>,
}

/// Settings the rankings were produced with, echoed into reports.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub w: Option<f64>,
    pub t_norm: Option<f64>,
    pub restricted_set: Option<LabelSet>,
    pub min_observed_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub avatars: usize,
    pub correct: f64,
    pub incorrect: f64,
    pub none: f64,
    pub top_1_rate: f64,
    pub top_3_rate: f64,
    pub top_k: usize,
    pub top_k_rate: f64,
    #[serde(default)]
    pub config: ConfigEcho,
    pub outcomes: Vec<AvatarOutcome>,
}

pub fn evaluate(rankings: &[RankedIdentityList], truth: &GroundTruth, top_k: usize) -> Result<EvalReport> {
    if rankings.is_empty() {
        return Err(Error::InvalidDataset("no rankings to evaluate".into()));
    }
    if top_k == 0 {
        return Err(Error::config("top_k", "must be at least 1"));
    }
    let mut outcomes = Vec::with_capacity(rankings.len());
    let mut counts = [0usize; 3];
    let mut within = [0usize; 3];
    for list in rankings {
        let identity = truth.identity_of(&list.avatar)?;
        let outcome = Outcome::of(list, identity);
        counts[outcome as usize] += 1;
        let rank = list.rank_of(identity).map(|r| r + 1);
        for (slot, k) in within.iter_mut().zip([1, 3, top_k]) {
            if rank.is_some_and(|r| r <= k) {
                *slot += 1;
            }
        }
        outcomes.push(AvatarOutcome {
            avatar: list.avatar.clone(),
            identity: identity.to_string(),
            outcome,
            rank,
        });
    }
    let n = rankings.len() as f64;
    Ok(EvalReport {
        avatars: rankings.len(),
        correct: counts[Outcome::Correct as usize] as f64 / n,
        incorrect: counts[Outcome::Incorrect as usize] as f64 / n,
        none: counts[Outcome::None as usize] as f64 / n,
        top_1_rate: within[0] as f64 / n,
        top_3_rate: within[1] as f64 / n,
        top_k,
        top_k_rate: within[2] as f64 / n,
        config: ConfigEcho::default(),
        outcomes,
    })
}

impl EvalReport {
    pub fn with_config(mut self, config: ConfigEcho) -> Self {
        self.config = config;
        self
    }

    pub fn outcome_list(&self) -> Vec<Outcome> {
        self.outcomes.iter().map(|o| o.outcome).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// One header row and one summary row.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["avatars", "correct", "incorrect", "none", "top_1_rate", "top_3_rate", "top_k", "top_k_rate"])?;
        w.write_record([
            self.avatars.to_string(),
            self.correct.to_string(),
            self.incorrect.to_string(),
            self.none.to_string(),
            self.top_1_rate.to_string(),
            self.top_3_rate.to_string(),
            self.top_k.to_string(),
            self.top_k_rate.to_string(),
        ])?;
        w.flush()?;
        Ok(())
    }
}
