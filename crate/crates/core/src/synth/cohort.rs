use std::collections::{BTreeMap, BTreeSet};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::motion::{synthesize_motion_trace, train_motion_classifier};
use super::spec::{CohortSpec, MotionPath};
use crate::error::{Error, Result};
use crate::model::{ActivityLabel, ActivityVectorSeries, Dataset, Magnitude, MagnitudeSeq, SensorPosition};
use crate::seed;
use crate::signal::{apply_confusion, build_series, MotionTrace, Trace};

/// Avatar → identity mapping plus every identity's true script.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruth {
    pub avatars: BTreeMap<String, String>,
    pub scripts: BTreeMap<String, Vec<ActivityLabel>>,
}

impl GroundTruth {
    pub fn identity_of(&self, avatar: &str) -> Result<&str> {
        self.avatars
            .get(avatar)
            .map(String::as_str)
            .ok_or_else(|| Error::MissingGroundTruth(avatar.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let distinct: BTreeSet<&String> = self.avatars.values().collect();
        if distinct.len() != self.avatars.len() {
            return Err(Error::InvalidDataset("ground truth maps two avatars to one identity".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ground truth serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: GroundTruth = serde_json::from_str(s)?;
        t.validate()?;
        Ok(t)
    }
}

fn id_width(n: usize) -> usize {
    n.saturating_sub(1).to_string().len().max(4)
}

pub fn identity_id(index: usize, n: usize) -> String {
    format!("id{index:0width$}", width = id_width(n))
}

pub fn avatar_id(index: usize, n: usize) -> String {
    format!("av{index:0width$}", width = id_width(n))
}

fn session_seed(spec: &CohortSpec, session: u64) -> u64 {
    if session == 0 {
        spec.seed
    } else {
        seed::derive(spec.seed, "session", session)
    }
}

fn script_with(spec: &CohortSpec, identity: usize, base_seed: u64) -> Vec<ActivityLabel> {
    let dist = WeightedIndex::new(spec.activity_prior).expect("validated prior");
    let mut rng = seed::rng(base_seed, "script", identity as u64);
    (0..spec.n_windows)
        .map(|_| ActivityLabel::ALL[dist.sample(&mut rng)])
        .collect()
}

/// I.i.d. labels from the activity prior, deterministic per (seed, identity).
pub fn generate_script(spec: &CohortSpec, identity: usize) -> Vec<ActivityLabel> {
    script_with(spec, identity, spec.seed)
}

/// Per-identity ground truth of one session.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityProfile {
    /// Constant per identity across sessions.
    pub intensity: f64,
    pub script: Vec<ActivityLabel>,
    /// True per-window movement magnitude shared by both channels.
    pub latent: Vec<f64>,
}

fn noise_factor<R: Rng>(rng: &mut R, sd: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    (1.0 + sd * z).max(0.0)
}

pub fn identity_profile(spec: &CohortSpec, identity: usize, session: u64) -> IdentityProfile {
    let [lo, hi] = spec.intensity_range;
    let intensity = seed::rng(spec.seed, "intensity", identity as u64).gen_range(lo..=hi);
    let s = session_seed(spec, session);
    let script = script_with(spec, if spec.shared_script { 0 } else { identity }, s);
    let mut rng = seed::rng(s, "latent", identity as u64);
    let latent = script
        .iter()
        .map(|l| spec.magnitude_base[l.index()] * intensity * noise_factor(&mut rng, spec.magnitude_noise_sd))
        .collect();
    IdentityProfile { intensity, script, latent }
}

/// Visual channel: confused labels and six noisy, partly occluded copies of
/// the latent magnitude.
pub fn synthesize_visual_series(
    spec: &CohortSpec,
    profile: &IdentityProfile,
    avatar: &str,
    stream_seed: u64,
) -> Result<ActivityVectorSeries> {
    let activities = apply_confusion(&profile.script, &spec.visual_cm, seed::derive(stream_seed, "visual-cm", 0));
    let mut rng = seed::rng(stream_seed, "visual-obs", 0);
    let mut mags: [Vec<Magnitude>; SensorPosition::COUNT] = Default::default();
    for l in &profile.latent {
        for p in SensorPosition::ALL {
            let seen = rng.gen::<f64>() < spec.position_observability[p.index()];
            let v = l * noise_factor(&mut rng, spec.observation_noise_sd);
            mags[p.index()].push(if seen { Magnitude::Observed(v) } else { Magnitude::Unobservable });
        }
    }
    let mut seqs: [MagnitudeSeq; SensorPosition::COUNT] = Default::default();
    for (dst, src) in seqs.iter_mut().zip(mags) {
        *dst = MagnitudeSeq::new(src)?;
    }
    ActivityVectorSeries::visual(avatar, spec.w, activities, seqs)
}

/// Motion channel without a trace: confused labels and noisy latent magnitudes.
pub fn synthesize_motion_series(
    spec: &CohortSpec,
    profile: &IdentityProfile,
    identity: &str,
    stream_seed: u64,
) -> Result<ActivityVectorSeries> {
    let activities = apply_confusion(&profile.script, &spec.motion_cm, seed::derive(stream_seed, "motion-cm", 0));
    let mut rng = seed::rng(stream_seed, "motion-obs", 0);
    let mags = profile
        .latent
        .iter()
        .map(|l| l * noise_factor(&mut rng, spec.observation_noise_sd))
        .collect();
    ActivityVectorSeries::motion(identity, spec.w, activities, mags)
}

/// Inertial trace of one identity starting at `t0`.
pub fn identity_motion_trace(profile: &IdentityProfile, spec: &CohortSpec, t0: f64, stream_seed: u64) -> Result<MotionTrace> {
    synthesize_motion_trace(&profile.script, &profile.latent, spec.w, t0, seed::derive(stream_seed, "trace", 0))
}

/// The inertial trace behind identity `identity`'s motion series in
/// `session`, as used when the spec's motion path is `trace`.
pub fn session_motion_trace(spec: &CohortSpec, identity: usize, session: u64) -> Result<MotionTrace> {
    let profile = identity_profile(spec, identity, session);
    let stream = seed::derive(session_seed(spec, session), "motion", identity as u64);
    identity_motion_trace(&profile, spec, 0.0, stream)
}

/// Avatar `a` shows identity `perm[a]`.
pub fn avatar_permutation(spec: &CohortSpec) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..spec.num_identities).collect();
    perm.shuffle(&mut seed::rng(spec.seed, "avatar-permutation", 0));
    perm
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cohort {
    pub visual: Dataset,
    pub motion: Dataset,
    pub truth: GroundTruth,
}

pub fn generate_cohort(spec: &CohortSpec) -> Result<Cohort> {
    generate_session(spec, 0)
}

/// Session `s` redraws scripts, latent noise and channel noise while keeping
/// identities, intensities and the avatar mapping. Session 0 is
/// [`generate_cohort`].
pub fn generate_session(spec: &CohortSpec, session: u64) -> Result<Cohort> {
    spec.validate()?;
    let n = spec.num_identities;
    let s = session_seed(spec, session);
    let profiles: Vec<IdentityProfile> = (0..n).into_par_iter().map(|i| identity_profile(spec, i, session)).collect();
    let classifier = match spec.motion_path {
        MotionPath::Direct => None,
        MotionPath::Trace => Some(train_motion_classifier(
            spec.w,
            &spec.magnitude_base,
            spec.intensity_range,
            seed::derive(spec.seed, "classifier", 0),
        )?),
    };
    let motion = (0..n)
        .into_par_iter()
        .map(|i| {
            let id = identity_id(i, n);
            let stream = seed::derive(s, "motion", i as u64);
            match &classifier {
                None => synthesize_motion_series(spec, &profiles[i], &id, stream),
                Some(model) => {
                    let trace = identity_motion_trace(&profiles[i], spec, 0.0, stream)?;
                    build_series(Trace::Motion(&trace), spec.w, model, &id)
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let perm = avatar_permutation(spec);
    let visual = perm
        .par_iter()
        .enumerate()
        .map(|(a, &i)| {
            synthesize_visual_series(spec, &profiles[i], &avatar_id(a, n), seed::derive(s, "visual", i as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    let truth = GroundTruth {
        avatars: perm.iter().enumerate().map(|(a, &i)| (avatar_id(a, n), identity_id(i, n))).collect(),
        scripts: profiles.iter().enumerate().map(|(i, p)| (identity_id(i, n), p.script.clone())).collect(),
    };
    Ok(Cohort {
        visual: Dataset::visual(visual)?,
        motion: Dataset::motion(motion)?,
        truth,
    })
}

/// Merges runs of `factor` windows into one longer window: the majority
/// label (lowest code on ties) and the mean magnitude. A visual position is
/// unobservable in the merged window when more than half of its parts were.
pub fn coarsen(series: &ActivityVectorSeries, factor: usize) -> Result<ActivityVectorSeries> {
    if factor == 0 {
        return Err(Error::config("factor", "must be at least 1"));
    }
    let n = series.len() / factor;
    let w = series.window_seconds() * factor as f64;
    let activities = series
        .activities()
        .chunks_exact(factor)
        .take(n)
        .map(|chunk| {
            let mut counts = [0usize; ActivityLabel::COUNT];
            for l in chunk {
                counts[l.index()] += 1;
            }
            let best = (0..ActivityLabel::COUNT).rev().max_by_key(|&i| counts[i]).expect("eight labels");
            ActivityLabel::ALL[best]
        })
        .collect();
    if let Some(mags) = series.motion_magnitudes() {
        let merged = mags.chunks_exact(factor).take(n).map(|c| c.iter().sum::<f64>() / factor as f64).collect();
        return ActivityVectorSeries::motion(series.source_id(), w, activities, merged);
    }
    let mut seqs: [MagnitudeSeq; SensorPosition::COUNT] = Default::default();
    for p in SensorPosition::ALL {
        let values = series.position_magnitudes(p).expect("visual series").values();
        let merged = values
            .chunks_exact(factor)
            .take(n)
            .map(|c| {
                let seen: Vec<f64> = c.iter().filter_map(|m| m.observed()).collect();
                if 2 * seen.len() < factor {
                    Magnitude::Unobservable
                } else {
                    Magnitude::Observed(seen.iter().sum::<f64>() / seen.len() as f64)
                }
            })
            .collect();
        seqs[p.index()] = MagnitudeSeq::new(merged)?;
    }
    ActivityVectorSeries::visual(series.source_id(), w, activities, seqs)
}

pub fn coarsen_dataset(dataset: &Dataset, factor: usize) -> Result<Dataset> {
    let series = dataset
        .series()
        .iter()
        .map(|s| coarsen(s, factor))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(dataset.channel(), series)
}
