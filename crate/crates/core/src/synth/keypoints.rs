//! Toy 2-D avatar whose body regions oscillate per activity label, for
//! exercising the visual half of the signal pipeline.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{ActivityLabel, Channel, SensorPosition};
use crate::seed;
use crate::signal::features::visual_features;
use crate::signal::magnitude::proxy_keypoint;
use crate::signal::trace::keypoints::{HANDS, HEAD, HIPS, LEGS, UPPER};
use crate::signal::window::segment_windows;
use crate::signal::{ClassifierModel, KeypointFrame, KeypointTrace};

pub const FRAME_RATE: f64 = 30.0;
/// Pixel/s² of proxy acceleration per unit of amplitude.
const GAIN: f64 = 40.0;

const SKELETON: [(&str, [f64; 2]); 17] = [
    ("nose", [0.0, -160.0]),
    ("left_eye", [-8.0, -168.0]),
    ("right_eye", [8.0, -168.0]),
    ("left_ear", [-16.0, -164.0]),
    ("right_ear", [16.0, -164.0]),
    ("left_shoulder", [-40.0, -120.0]),
    ("right_shoulder", [40.0, -120.0]),
    ("left_elbow", [-55.0, -70.0]),
    ("right_elbow", [55.0, -70.0]),
    ("left_wrist", [-60.0, -20.0]),
    ("right_wrist", [60.0, -20.0]),
    ("left_hip", [-25.0, 0.0]),
    ("right_hip", [25.0, 0.0]),
    ("left_knee", [-25.0, 70.0]),
    ("right_knee", [25.0, 70.0]),
    ("left_ankle", [-25.0, 140.0]),
    ("right_ankle", [25.0, 140.0]),
];
const CENTER: [f64; 2] = [320.0, 240.0];

type Component = (&'static [&'static str], [f64; 2], f64);

const ALL: [&str; 17] = [
    "nose", "left_eye", "right_eye", "left_ear", "right_ear", "left_shoulder", "right_shoulder",
    "left_elbow", "right_elbow", "left_wrist", "right_wrist", "left_hip", "right_hip", "left_knee",
    "right_knee", "left_ankle", "right_ankle",
];
const TORSO_UP: [&str; 11] = [
    "nose", "left_eye", "right_eye", "left_ear", "right_ear", "left_shoulder", "right_shoulder",
    "left_elbow", "right_elbow", "left_wrist", "right_wrist",
];

fn components(label: ActivityLabel) -> &'static [Component] {
    match label {
        ActivityLabel::Idle => &[(&ALL, [1.0, 0.0], 0.3)],
        ActivityLabel::BodyRotation => &[(&TORSO_UP, [1.0, 0.0], 0.5), (&HIPS, [0.5, 0.0], 0.5)],
        ActivityLabel::HeadRotation => &[(&HEAD, [1.0, 0.0], 1.0), (&ALL, [0.2, 0.0], 1.0)],
        ActivityLabel::HandMovement => &[(&HANDS, [1.0, 1.0], 2.0), (&UPPER, [0.5, 0.5], 2.0), (&HIPS, [0.2, 0.0], 2.0)],
        ActivityLabel::Walking => &[(&ALL, [0.0, 0.3], 2.0), (&LEGS, [1.0, 0.0], 1.0), (&HANDS, [1.0, 0.0], 1.0), (&HIPS, [0.5, 0.5], 2.0)],
        ActivityLabel::Bending => &[(&TORSO_UP, [0.0, 1.0], 0.5), (&HIPS, [0.3, 0.3], 0.5)],
        ActivityLabel::Jumping => &[(&ALL, [0.0, 1.0], 2.5)],
        ActivityLabel::Other => &[(&HANDS, [1.0, -1.0], 1.5), (&HEAD, [0.5, 0.5], 1.5), (&HIPS, [0.5, 0.0], 1.5)],
    }
}

/// Keypoint positions at 30 fps; window `i` oscillates with acceleration
/// proportional to `amplitudes[i]`. Each window's proxy keypoint for a
/// position goes missing with probability `1 − observability[position]`.
pub fn synthesize_keypoint_trace(
    script: &[ActivityLabel],
    amplitudes: &[f64],
    observability: &[f64; SensorPosition::COUNT],
    w: f64,
    seed: u64,
) -> Result<KeypointTrace> {
    if script.len() != amplitudes.len() {
        return Err(Error::LengthMismatch {
            expected: script.len(),
            found: amplitudes.len(),
        });
    }
    let mut rng = seed::rng(seed, "keypoint-synth", 0);
    let phases: Vec<f64> = script.iter().map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    let hidden: Vec<Vec<&str>> = script
        .iter()
        .map(|_| {
            SensorPosition::ALL
                .iter()
                .filter(|p| !rng.gen_bool(observability[p.index()].clamp(0.0, 1.0)))
                .map(|p| proxy_keypoint(*p))
                .collect()
        })
        .collect();
    let dt = 1.0 / FRAME_RATE;
    let n = (script.len() as f64 * w * FRAME_RATE + 1e-6).floor() as usize;
    let frames = (0..n)
        .map(|j| {
            let t = j as f64 * dt;
            let i = ((t / w + 1e-9).floor() as usize).min(script.len() - 1);
            let mut kp: BTreeMap<String, Option<[f64; 2]>> = SKELETON
                .iter()
                .map(|(name, o)| (name.to_string(), Some([CENTER[0] + o[0], CENTER[1] + o[1]])))
                .collect();
            for (names, dir, hz) in components(script[i]) {
                let omega = 2.0 * PI * hz;
                let disp = amplitudes[i] * GAIN / (omega * omega) * (omega * (t - i as f64 * w) + phases[i]).sin();
                for name in names.iter() {
                    if let Some(Some(p)) = kp.get_mut(*name) {
                        p[0] += dir[0] * disp;
                        p[1] += dir[1] * disp;
                    }
                }
            }
            for name in &hidden[i] {
                kp.insert(name.to_string(), None);
            }
            KeypointFrame { t, keypoints: kp }
        })
        .collect();
    KeypointTrace::new(frames, FRAME_RATE)
}

pub fn visual_training_set(
    w: f64,
    per_label: usize,
    magnitude_base: &[f64; ActivityLabel::COUNT],
    intensity_range: [f64; 2],
    seed: u64,
) -> Result<Vec<(ActivityLabel, Vec<f64>)>> {
    let mut out = Vec::with_capacity(per_label * ActivityLabel::COUNT);
    for label in ActivityLabel::ALL {
        let mut rng = seed::rng(seed, "visual-training", label.code().into());
        let script = vec![label; per_label];
        let amps: Vec<f64> = script
            .iter()
            .map(|l| magnitude_base[l.index()] * rng.gen_range(intensity_range[0]..=intensity_range[1]))
            .collect();
        let trace = synthesize_keypoint_trace(&script, &amps, &[1.0; SensorPosition::COUNT], w, rng.gen())?;
        for win in segment_windows(trace.frames(), trace.frame_interval(), w)? {
            out.push((label, visual_features(&trace.frames()[win.range])?));
        }
    }
    Ok(out)
}

pub fn train_visual_classifier(
    w: f64,
    magnitude_base: &[f64; ActivityLabel::COUNT],
    intensity_range: [f64; 2],
    seed: u64,
) -> Result<ClassifierModel> {
    let samples = visual_training_set(w, 40, magnitude_base, intensity_range, seed)?;
    ClassifierModel::fit(Channel::Visual, &samples)
}
