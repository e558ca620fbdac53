//! Kinematic stand-in for a body-worn inertial sensor.
//!
//! Each window holds the device at a label-specific tilt and swings it about
//! one axis at a label-specific rate. The accelerometer reads
//! `(g + A)·u(t)` for the unit orientation `u(t)`, so the gravity-compensated
//! magnitude of every sample is exactly the window amplitude `A`. The
//! gyroscope reads the swing rate about the swing axis.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{ActivityLabel, Channel};
use crate::seed;
use crate::signal::build::smooth_trace;
use crate::signal::window::segment_windows;
use crate::signal::features::motion_features;
use crate::signal::{ClassifierModel, MotionSample, MotionTrace, SavGolConfig, GRAVITY};

pub const SAMPLE_RATE: f64 = 50.0;

#[derive(Debug, Clone, Copy)]
struct Gait {
    /// Swing about x (`false`) or y (`true`).
    about_y: bool,
    tilt: f64,
    hz: f64,
    swing: f64,
}

fn gait(label: ActivityLabel) -> Gait {
    let g = |about_y, tilt, hz, swing| Gait { about_y, tilt, hz, swing };
    match label {
        ActivityLabel::Idle => g(false, 0.0, 0.0, 0.0),
        ActivityLabel::BodyRotation => g(true, 0.35, 0.5, 0.3),
        ActivityLabel::HeadRotation => g(false, 0.35, 1.0, 0.15),
        ActivityLabel::HandMovement => g(true, -0.35, 2.0, 0.25),
        ActivityLabel::Walking => g(false, -0.35, 2.0, 0.2),
        ActivityLabel::Bending => g(true, 0.9, 0.5, 0.2),
        ActivityLabel::Jumping => g(false, 0.9, 3.0, 0.3),
        ActivityLabel::Other => g(true, -0.9, 1.5, 0.4),
    }
}

const BLEND_SECONDS: f64 = 0.04;

fn orientation(g: Gait, arg: f64) -> ([f64; 3], [f64; 3]) {
    let theta = g.tilt + g.swing * arg.sin();
    let rate = g.swing * 2.0 * PI * g.hz * arg.cos();
    let (s, c) = theta.sin_cos();
    if g.about_y {
        ([s, 0.0, c], [0.0, rate, 0.0])
    } else {
        ([0.0, -s, c], [rate, 0.0, 0.0])
    }
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n < 1e-12 {
        [0.0, 0.0, 1.0]
    } else {
        v.map(|c| c / n)
    }
}

/// Samples `script` at [`SAMPLE_RATE`] from `t0`; window `i` deviates from
/// gravity by exactly `amplitudes[i]`.
pub fn synthesize_motion_trace(
    script: &[ActivityLabel],
    amplitudes: &[f64],
    w: f64,
    t0: f64,
    seed: u64,
) -> Result<MotionTrace> {
    if script.len() != amplitudes.len() {
        return Err(Error::LengthMismatch {
            expected: script.len(),
            found: amplitudes.len(),
        });
    }
    if amplitudes.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
        return Err(Error::InvalidTrace("amplitudes must be finite and non-negative".into()));
    }
    let mut rng = seed::rng(seed, "motion-phase", 0);
    let phases: Vec<f64> = script.iter().map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    let dt = 1.0 / SAMPLE_RATE;
    let n = (script.len() as f64 * w * SAMPLE_RATE + 1e-6).floor() as usize;
    let mut samples = Vec::with_capacity(n);
    // Orientation eases from where the previous window left off.
    let mut carry = [0.0; 3];
    let mut prev_u: Option<[f64; 3]> = None;
    let mut current = usize::MAX;
    for j in 0..n {
        let local = j as f64 * dt;
        let i = ((local / w + 1e-9).floor() as usize).min(script.len() - 1);
        let g = gait(script[i]);
        let since = local - i as f64 * w;
        let arg = 2.0 * PI * g.hz * since + phases[i];
        let (target, gyro) = orientation(g, arg);
        if i != current {
            current = i;
            carry = match prev_u {
                Some(p) => [p[0] - target[0], p[1] - target[1], p[2] - target[2]],
                None => [0.0; 3],
            };
        }
        let fade = (-since / BLEND_SECONDS).exp();
        let u = unit([
            target[0] + carry[0] * fade,
            target[1] + carry[1] * fade,
            target[2] + carry[2] * fade,
        ]);
        prev_u = Some(u);
        let norm = GRAVITY + amplitudes[i];
        samples.push(MotionSample {
            t: t0 + local,
            accel: u.map(|c| c * norm),
            gyro,
        });
    }
    MotionTrace::new(samples, dt)
}

/// Feature vectors of synthetic windows, `per_label` for every label, with
/// intensities drawn from `intensity_range`.
pub fn motion_training_set(
    w: f64,
    per_label: usize,
    magnitude_base: &[f64; ActivityLabel::COUNT],
    intensity_range: [f64; 2],
    seed: u64,
) -> Result<Vec<(ActivityLabel, Vec<f64>)>> {
    let smoothing = SavGolConfig::default();
    let mut rng = seed::rng(seed, "motion-training", 0);
    let mut script: Vec<ActivityLabel> = ActivityLabel::ALL
        .iter()
        .flat_map(|l| std::iter::repeat_n(*l, per_label))
        .collect();
    script.shuffle(&mut rng);
    let amps: Vec<f64> = script
        .iter()
        .map(|l| magnitude_base[l.index()] * rng.gen_range(intensity_range[0]..=intensity_range[1]))
        .collect();
    let trace = synthesize_motion_trace(&script, &amps, w, 0.0, rng.gen())?;
    let smoothed = smooth_trace(trace.samples(), &smoothing)?;
    let mut out = Vec::with_capacity(script.len());
    for (win, label) in segment_windows(&smoothed, trace.nominal_interval(), w)?.into_iter().zip(&script) {
        out.push((*label, motion_features(&smoothed[win.range], w)?));
    }
    Ok(out)
}

/// Nearest-centroid model fitted on [`motion_training_set`].
pub fn train_motion_classifier(
    w: f64,
    magnitude_base: &[f64; ActivityLabel::COUNT],
    intensity_range: [f64; 2],
    seed: u64,
) -> Result<ClassifierModel> {
    let samples = motion_training_set(w, 40, magnitude_base, intensity_range, seed)?;
    ClassifierModel::fit(Channel::Motion, &samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{build_series, motion_magnitude, Classifier, Trace};
    use crate::synth::spec::default_magnitude_base;

    #[test]
    fn idle_has_no_deviation() {
        let t = synthesize_motion_trace(&[ActivityLabel::Idle; 3], &[0.0; 3], 1.0, 0.0, 1).unwrap();
        assert_eq!(t.samples().len(), 150);
        assert!(motion_magnitude(t.samples()).unwrap() < 1e-12);
    }

    #[test]
    fn walking_magnitude_matches_amplitude() {
        // Base 2.0 at intensity 1.5.
        let t = synthesize_motion_trace(&[ActivityLabel::Walking; 4], &[3.0; 4], 1.0, 0.0, 9).unwrap();
        assert!((motion_magnitude(t.samples()).unwrap() - 3.0).abs() < 1e-9);
        // Through smoothing and windowing.
        let model = train_motion_classifier(1.0, &default_magnitude_base(), [0.5, 1.5], 3).unwrap();
        let s = build_series(Trace::Motion(&t), 1.0, &model, "x").unwrap();
        for m in s.motion_magnitudes().unwrap() {
            assert!((m - 3.0).abs() < 0.05, "{m}");
        }
    }

    #[test]
    fn magnitude_monotone_in_intensity() {
        let mags: Vec<f64> = [0.8, 1.0, 1.6]
            .iter()
            .map(|c| {
                let t = synthesize_motion_trace(&[ActivityLabel::Jumping; 2], &[4.0 * c; 2], 1.0, 0.0, 5).unwrap();
                motion_magnitude(t.samples()).unwrap()
            })
            .collect();
        assert!(mags.windows(2).all(|p| p[0] < p[1]), "{mags:?}");
    }

    #[test]
    fn classifier_recovers_scripts() {
        let model = train_motion_classifier(1.0, &default_magnitude_base(), [0.5, 1.5], 3).unwrap();
        assert_eq!(model.feature_len(), 24);
        let script: Vec<ActivityLabel> = (0..40).map(|i| ActivityLabel::ALL[(i * 5 + i / 8) % 8]).collect();
        let base = default_magnitude_base();
        let amps: Vec<f64> = script.iter().enumerate().map(|(i, l)| base[l.index()] * (0.6 + 0.02 * i as f64)).collect();
        let t = synthesize_motion_trace(&script, &amps, 1.0, 0.0, 77).unwrap();
        let s = build_series(Trace::Motion(&t), 1.0, &model, "x").unwrap();
        let wrong = s.activities().iter().zip(&script).filter(|(a, b)| a != b).count();
        assert!(wrong <= 2, "{wrong} misclassified windows");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(synthesize_motion_trace(&[ActivityLabel::Idle], &[], 1.0, 0.0, 0).is_err());
        assert!(synthesize_motion_trace(&[ActivityLabel::Idle], &[-1.0], 1.0, 0.0, 0).is_err());
    }
}
