//! Activity classification behind a small trait, with a nearest-centroid
//! baseline operating in z-scored feature space.

use serde::{Deserialize, Serialize};

use super::features::feature_len;
use crate::error::{Error, Result};
use crate::model::{ActivityLabel, Channel};

/// Format version of persisted classifier models.
pub const MODEL_FORMAT_VERSION: &str = "centroid-model/1";

pub trait Classifier {
    fn channel(&self) -> Channel;
    fn feature_len(&self) -> usize;
    fn classify(&self, features: &[f64]) -> Result<ActivityLabel>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierModel {
    pub channel: Channel,
    pub feature_mean: Vec<f64>,
    pub feature_scale: Vec<f64>,
    /// One z-scored centroid per label, in label-code order.
    pub centroids: Vec<Vec<f64>>,
}

impl ClassifierModel {
    pub fn validate(&self) -> Result<()> {
        let d = self.feature_mean.len();
        if d == 0 {
            return Err(Error::InvalidModel("empty feature space".into()));
        }
        if self.feature_scale.len() != d {
            return Err(Error::InvalidModel("scale and mean lengths differ".into()));
        }
        if self.centroids.len() != ActivityLabel::COUNT {
            return Err(Error::InvalidModel(format!(
                "expected {} centroids, found {}",
                ActivityLabel::COUNT,
                self.centroids.len()
            )));
        }
        if self.centroids.iter().any(|c| c.len() != d) {
            return Err(Error::InvalidModel("centroid dimension mismatch".into()));
        }
        let finite = self.feature_mean.iter().all(|v| v.is_finite())
            && self.feature_scale.iter().all(|v| v.is_finite() && *v > 0.0)
            && self.centroids.iter().flatten().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidModel("non-finite or non-positive parameter".into()));
        }
        Ok(())
    }

    /// Fits normalisation statistics over all samples and one centroid per
    /// label. Every label needs at least one sample.
    pub fn fit(channel: Channel, samples: &[(ActivityLabel, Vec<f64>)]) -> Result<Self> {
        let d = feature_len(channel);
        if let Some((_, bad)) = samples.iter().find(|(_, f)| f.len() != d) {
            return Err(Error::ModelMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        if samples.is_empty() {
            return Err(Error::InvalidModel("no training samples".into()));
        }
        let n = samples.len() as f64;
        let mut mean = vec![0.0; d];
        for (_, f) in samples {
            for (m, v) in mean.iter_mut().zip(f) {
                *m += v / n;
            }
        }
        let mut scale = vec![0.0; d];
        for (_, f) in samples {
            for ((s, v), m) in scale.iter_mut().zip(f).zip(&mean) {
                *s += (v - m).powi(2) / n;
            }
        }
        for s in &mut scale {
            *s = s.sqrt();
            if *s < 1e-12 {
                *s = 1.0;
            }
        }
        let mut sums = vec![vec![0.0; d]; ActivityLabel::COUNT];
        let mut counts = [0usize; ActivityLabel::COUNT];
        for (label, f) in samples {
            counts[label.index()] += 1;
            for (k, v) in f.iter().enumerate() {
                sums[label.index()][k] += (v - mean[k]) / scale[k];
            }
        }
        if let Some(missing) = ActivityLabel::ALL.iter().find(|l| counts[l.index()] == 0) {
            return Err(Error::InvalidModel(format!("no training samples for `{missing}`")));
        }
        let centroids = sums
            .into_iter()
            .zip(counts)
            .map(|(s, c)| s.into_iter().map(|v| v / c as f64).collect())
            .collect();
        let model = ClassifierModel {
            channel,
            feature_mean: mean,
            feature_scale: scale,
            centroids,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let model: ClassifierModel = serde_json::from_str(s)?;
        model.validate()?;
        Ok(model)
    }
}

impl Classifier for ClassifierModel {
    fn channel(&self) -> Channel {
        self.channel
    }

    fn feature_len(&self) -> usize {
        self.feature_mean.len()
    }

    /// Nearest centroid; ties go to the lowest label code.
    fn classify(&self, features: &[f64]) -> Result<ActivityLabel> {
        classify_window(self, features)
    }
}

pub fn classify_window(model: &ClassifierModel, features: &[f64]) -> Result<ActivityLabel> {
    if features.len() != model.feature_mean.len() {
        return Err(Error::ModelMismatch {
            expected: model.feature_mean.len(),
            found: features.len(),
        });
    }
    let z: Vec<f64> = features
        .iter()
        .zip(&model.feature_mean)
        .zip(&model.feature_scale)
        .map(|((v, m), s)| (v - m) / s)
        .collect();
    let mut best = (ActivityLabel::Idle, f64::INFINITY);
    for (label, centroid) in ActivityLabel::ALL.iter().zip(&model.centroids) {
        let d: f64 = z.iter().zip(centroid).map(|(a, b)| (a - b).powi(2)).sum();
        // Strict `<` keeps the lowest code on ties; NaN never wins.
        if d < best.1 {
            best = (*label, d);
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_model() -> ClassifierModel {
        let d = 2;
        let mut centroids = vec![vec![100.0; d]; 8];
        centroids[ActivityLabel::Idle.index()] = vec![0.0, 0.0];
        centroids[ActivityLabel::Walking.index()] = vec![1.0, 0.0];
        centroids[ActivityLabel::Jumping.index()] = vec![-1.0, 0.0];
        ClassifierModel {
            channel: Channel::Visual,
            feature_mean: vec![0.0; d],
            feature_scale: vec![1.0; d],
            centroids,
        }
    }

    #[test]
    fn nearest_centroid_and_ties() {
        let m = toy_model();
        assert_eq!(classify_window(&m, &[0.0, 0.0]).unwrap(), ActivityLabel::Idle);
        // Equidistant from Walking (1,0) and Jumping (-1,0), far from Idle.
        let mut m2 = m.clone();
        m2.centroids[ActivityLabel::Idle.index()] = vec![50.0, 50.0];
        assert_eq!(classify_window(&m2, &[0.0, 0.0]).unwrap(), ActivityLabel::Walking);
        assert!(matches!(
            classify_window(&m, &[0.0]),
            Err(Error::ModelMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let m = toy_model();
        assert_eq!(ClassifierModel::from_json(&m.to_json()).unwrap(), m);
        let mut bad = m.clone();
        bad.centroids.pop();
        assert!(ClassifierModel::from_json(&bad.to_json()).is_err());
        let mut bad = m;
        bad.feature_scale[0] = 0.0;
        assert!(ClassifierModel::from_json(&bad.to_json()).is_err());
    }

    #[test]
    fn fit_requires_every_label() {
        let samples: Vec<_> = (0..7)
            .map(|i| (ActivityLabel::ALL[i], vec![i as f64; feature_len(Channel::Visual)]))
            .collect();
        assert!(ClassifierModel::fit(Channel::Visual, &samples).is_err());
        let samples: Vec<_> = (0..8)
            .map(|i| (ActivityLabel::ALL[i], vec![i as f64; feature_len(Channel::Visual)]))
            .collect();
        let m = ClassifierModel::fit(Channel::Visual, &samples).unwrap();
        for (l, f) in &samples {
            assert_eq!(m.classify(f).unwrap(), *l);
        }
    }
}
