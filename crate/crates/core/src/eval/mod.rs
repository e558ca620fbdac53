//! Outcome metrics, parameter sweeps, multi-session intersection and the
//! filtering benchmark.

pub mod bench;
pub mod report;
pub mod sessions;
pub mod sweep;

pub use bench::{bench_datasets, bench_scaling, linear_fit, write_scaling_csv, BenchConfig, LinearFit, Method, RowStatus, ScalingRow};
pub use report::{evaluate, AvatarOutcome, ConfigEcho, EvalReport};
pub use sessions::intersect_sessions;
pub use sweep::{sweep_parameters, write_sweep_csv, write_sweep_long, SweepCell};

use crate::correlate::LabelSet;
use crate::error::{Error, Result};
use crate::model::ActivityLabel;
use crate::signal::ConfusionMatrix;

/// Labels whose confusion, `1 −` the lowest diagonal agreement over the
/// given matrices, is below `threshold`.
pub fn restricted_set_from_confusion(matrices: &[&ConfusionMatrix], threshold: f64) -> Result<LabelSet> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::config("threshold", format!("must lie in (0, 1], got {threshold}")));
    }
    if matrices.is_empty() {
        return Err(Error::config("matrices", "need at least one confusion matrix"));
    }
    Ok(ActivityLabel::ALL
        .into_iter()
        .filter(|l| {
            let agreement = matrices.iter().map(|m| m.diagonal(*l)).fold(f64::INFINITY, f64::min);
            1.0 - agreement < threshold
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{field_like_motion_cm, field_like_visual_cm};

    #[test]
    fn restricted_sets() {
        let id = ConfusionMatrix::identity();
        assert_eq!(restricted_set_from_confusion(&[&id, &id], 0.6).unwrap(), LabelSet::all());
        let (m, v) = (field_like_motion_cm(), field_like_visual_cm());
        let set = restricted_set_from_confusion(&[&m, &v], 0.6).unwrap();
        use ActivityLabel::*;
        let want: LabelSet = [BodyRotation, HandMovement, Walking, Bending, Jumping, Other].into_iter().collect();
        assert_eq!(set, want);
        assert_eq!(restricted_set_from_confusion(&[&m, &v], 1.0).unwrap(), LabelSet::all());
        assert!(restricted_set_from_confusion(&[&m], 0.0).is_err());
    }

    #[test]
    fn monotone_in_threshold() {
        let (m, v) = (field_like_motion_cm(), field_like_visual_cm());
        let mut prev = LabelSet::empty();
        for t in [0.05, 0.1, 0.2, 0.3, 0.5, 0.65, 0.7, 0.8, 0.9, 1.0] {
            let s = restricted_set_from_confusion(&[&m, &v], t).unwrap();
            assert!(prev.is_subset(s));
            prev = s;
        }
    }
}
