use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ActivityLabel;

const N: usize = ActivityLabel::COUNT;

/// Row-stochastic 8×8 matrix: rows are true labels, columns observed labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfusionWire", into = "ConfusionWire")]
pub struct ConfusionMatrix {
    rows: [[f64; N]; N],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfusionWire {
    rows: Vec<Vec<f64>>,
}

impl TryFrom<ConfusionWire> for ConfusionMatrix {
    type Error = Error;

    fn try_from(w: ConfusionWire) -> Result<Self> {
        if w.rows.len() != N || w.rows.iter().any(|r| r.len() != N) {
            return Err(Error::InvalidConfusionMatrix("expected 8×8 entries".into()));
        }
        let mut rows = [[0.0; N]; N];
        for (dst, src) in rows.iter_mut().zip(&w.rows) {
            dst.copy_from_slice(src);
        }
        ConfusionMatrix::new(rows)
    }
}

impl From<ConfusionMatrix> for ConfusionWire {
    fn from(m: ConfusionMatrix) -> Self {
        ConfusionWire {
            rows: m.rows.iter().map(|r| r.to_vec()).collect(),
        }
    }
}

impl ConfusionMatrix {
    pub fn new(rows: [[f64; N]; N]) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::InvalidConfusionMatrix(format!(
                    "row {i} has an entry outside [0, 1]"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidConfusionMatrix(format!(
                    "row {i} sums to {sum}, not 1"
                )));
            }
        }
        Ok(ConfusionMatrix { rows })
    }

    pub fn identity() -> Self {
        let mut rows = [[0.0; N]; N];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        ConfusionMatrix { rows }
    }

    /// Each row keeps `accuracy[i]` on the diagonal and spreads the rest
    /// uniformly over the other labels.
    pub fn from_diagonal(accuracy: [f64; N]) -> Result<Self> {
        let mut rows = [[0.0; N]; N];
        for (i, row) in rows.iter_mut().enumerate() {
            let off = (1.0 - accuracy[i]) / (N - 1) as f64;
            for (j, p) in row.iter_mut().enumerate() {
                *p = if i == j { accuracy[i] } else { off };
            }
        }
        Self::new(rows)
    }

    pub fn rows(&self) -> &[[f64; N]; N] {
        &self.rows
    }

    pub fn get(&self, truth: ActivityLabel, observed: ActivityLabel) -> f64 {
        self.rows[truth.index()][observed.index()]
    }

    pub fn diagonal(&self, label: ActivityLabel) -> f64 {
        self.get(label, label)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Draws an observed label for `truth` from its row.
    pub fn sample<R: Rng + ?Sized>(&self, truth: ActivityLabel, rng: &mut R) -> ActivityLabel {
        let row = &self.rows[truth.index()];
        let u: f64 = rng.gen();
        let mut cum = 0.0;
        let mut last_nonzero = truth;
        for (label, p) in ActivityLabel::ALL.iter().zip(row) {
            if *p > 0.0 {
                last_nonzero = *label;
            }
            cum += p;
            if u < cum {
                return *label;
            }
        }
        last_nonzero
    }
}

/// Resamples every label independently from its confusion row; deterministic
/// for a fixed seed.
pub fn apply_confusion(labels: &[ActivityLabel], cm: &ConfusionMatrix, seed: u64) -> Vec<ActivityLabel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    labels.iter().map(|l| cm.sample(*l, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_non_stochastic() {
        let mut rows = [[0.0; N]; N];
        rows[0][0] = 1.0;
        assert!(matches!(ConfusionMatrix::new(rows), Err(Error::InvalidConfusionMatrix(_))));
        let mut rows = ConfusionMatrix::identity().rows;
        rows[3][3] = 1.5;
        rows[3][4] = -0.5;
        assert!(ConfusionMatrix::new(rows).is_err());
        let json = r#"{"rows":[[1,0]]}"#;
        assert!(serde_json::from_str::<ConfusionMatrix>(json).is_err());
    }

    #[test]
    fn uniform_idle_row_rate() {
        let mut rows = ConfusionMatrix::identity().rows;
        rows[0] = [0.125; N];
        let cm = ConfusionMatrix::new(rows).unwrap();
        let out = apply_confusion(&vec![ActivityLabel::Idle; 10_000], &cm, 7);
        let rate = out.iter().filter(|l| **l == ActivityLabel::Idle).count() as f64 / 10_000.0;
        assert!((rate - 0.125).abs() < 0.02, "{rate}");
    }

    #[test]
    fn idle_to_walking_rate() {
        let mut rows = ConfusionMatrix::identity().rows;
        rows[0] = [0.0; N];
        rows[0][0] = 0.6;
        rows[0][ActivityLabel::Walking.index()] = 0.4;
        let cm = ConfusionMatrix::new(rows).unwrap();
        let out = apply_confusion(&vec![ActivityLabel::Idle; 10_000], &cm, 99);
        let rate = out.iter().filter(|l| **l == ActivityLabel::Walking).count() as f64 / 10_000.0;
        assert!((rate - 0.4).abs() < 0.02, "{rate}");
    }

    #[test]
    fn json_round_trip() {
        let cm = ConfusionMatrix::from_diagonal([0.36, 0.7, 0.3, 0.7, 0.8, 0.7, 0.7, 0.6]).unwrap();
        let s = serde_json::to_string(&cm).unwrap();
        assert_eq!(serde_json::from_str::<ConfusionMatrix>(&s).unwrap(), cm);
    }

    proptest! {
        #[test]
        fn identity_channel_is_identity(codes in proptest::collection::vec(0i64..8, 0..200), seed in any::<u64>()) {
            let labels: Vec<_> = codes.iter().map(|c| ActivityLabel::from_code(*c).unwrap()).collect();
            prop_assert_eq!(apply_confusion(&labels, &ConfusionMatrix::identity(), seed), labels);
        }

        #[test]
        fn deterministic_per_seed(codes in proptest::collection::vec(0i64..8, 0..100), seed in any::<u64>()) {
            let labels: Vec<_> = codes.iter().map(|c| ActivityLabel::from_code(*c).unwrap()).collect();
            let cm = ConfusionMatrix::from_diagonal([0.5; 8]).unwrap();
            prop_assert_eq!(apply_confusion(&labels, &cm, seed), apply_confusion(&labels, &cm, seed));
        }
    }
}
