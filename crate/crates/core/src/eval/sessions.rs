use std::collections::HashMap;

use crate::correlate::{ranking_order, RankedEntry, RankedIdentityList};
use crate::error::{Error, Result};

/// Keeps, per avatar, only identities ranked in every session and re-ranks
/// them by mean correlation. Sessions whose correlation is undefined for an
/// identity do not contribute to its mean; an identity with no defined
/// correlation at all ranks last.
pub fn intersect_sessions(sessions: &[Vec<RankedIdentityList>]) -> Result<Vec<RankedIdentityList>> {
    if sessions.len() < 2 {
        return Err(Error::config("sessions", "need at least two sessions"));
    }
    let lookup: Vec<HashMap<&str, &RankedIdentityList>> = sessions
        .iter()
        .map(|s| s.iter().map(|l| (l.avatar.as_str(), l)).collect())
        .collect();
    for (i, m) in lookup.iter().enumerate() {
        if m.len() != sessions[0].len() || sessions[0].iter().any(|l| !m.contains_key(l.avatar.as_str())) {
            return Err(Error::InvalidDataset(format!(
                "session {i} does not cover the same avatars as session 0"
            )));
        }
    }
    Ok(sessions[0]
        .iter()
        .map(|first| {
            let lists: Vec<&RankedIdentityList> = lookup.iter().map(|m| m[first.avatar.as_str()]).collect();
            let mut entries: Vec<RankedEntry> = first
                .entries
                .iter()
                .filter_map(|e| {
                    let mut sum = 0.0;
                    let mut defined = 0usize;
                    for list in &lists {
                        let hit = list.entries.iter().find(|x| x.identity == e.identity)?;
                        if let Some(r) = hit.rho {
                            sum += r;
                            defined += 1;
                        }
                    }
                    Some(RankedEntry {
                        identity: e.identity.clone(),
                        rho: (defined > 0).then(|| sum / defined as f64),
                        position: e.position,
                    })
                })
                .collect();
            entries.sort_by(ranking_order);
            RankedIdentityList {
                avatar: first.avatar.clone(),
                entries,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SensorPosition;

    fn list(avatar: &str, e: &[(&str, f64)]) -> RankedIdentityList {
        RankedIdentityList {
            avatar: avatar.into(),
            entries: e
                .iter()
                .map(|(id, r)| RankedEntry {
                    identity: id.to_string(),
                    rho: Some(*r),
                    position: SensorPosition::RightWrist,
                })
                .collect(),
        }
    }

    #[test]
    fn single_candidate_survives() {
        let s = vec![vec![list("a", &[("m1", 0.5)])], vec![list("a", &[("m1", 0.7)])]];
        let out = intersect_sessions(&s).unwrap();
        assert_eq!(out[0].entries.len(), 1);
        assert!((out[0].entries[0].rho.unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn disjoint_is_empty_and_reranks() {
        let s = vec![vec![list("a", &[("m1", 0.9)])], vec![list("a", &[("m2", 0.9)])]];
        assert!(intersect_sessions(&s).unwrap()[0].is_empty());
        let s = vec![
            vec![list("a", &[("m1", 0.9), ("m2", 0.5), ("m3", 0.1)])],
            vec![list("a", &[("m2", 0.95), ("m1", 0.2)])],
            vec![list("a", &[("m2", 0.9), ("m1", 0.1), ("m4", 0.99)])],
        ];
        let out = intersect_sessions(&s).unwrap();
        let ids: Vec<&str> = out[0].entries.iter().map(|e| e.identity.as_str()).collect();
        assert_eq!(ids, ["m2", "m1"]);
        assert!(out[0].entries.len() <= s.iter().map(|x| x[0].entries.len()).min().unwrap());
    }

    #[test]
    fn requires_matching_sessions() {
        assert!(intersect_sessions(&[vec![list("a", &[])]]).is_err());
        let s = vec![vec![list("a", &[])], vec![list("b", &[])]];
        assert!(intersect_sessions(&s).is_err());
    }
}
