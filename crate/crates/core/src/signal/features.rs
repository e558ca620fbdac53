//! Hand-crafted window features feeding the activity classifier.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::trace::{keypoints, KeypointFrame, MotionSample};
use crate::error::{Error, Result};
use crate::model::Channel;

/// Six axes (accel xyz, gyro xyz) × (mean, std, jerk energy, dominant Hz).
pub const MOTION_FEATURES: usize = 24;
/// Five keypoint groups × (speed mean, speed std) + spatial spread.
pub const VISUAL_FEATURES: usize = 11;

pub fn feature_len(channel: Channel) -> usize {
    match channel {
        Channel::Motion => MOTION_FEATURES,
        Channel::Visual => VISUAL_FEATURES,
    }
}

/// A window of either channel.
#[derive(Debug, Clone, Copy)]
pub enum ChannelWindow<'a> {
    Motion {
        samples: &'a [MotionSample],
        /// Window length in seconds, used to express frequencies in Hz.
        seconds: f64,
    },
    Visual(&'a [KeypointFrame]),
}

pub fn extract_features(window: ChannelWindow<'_>) -> Result<Vec<f64>> {
    match window {
        ChannelWindow::Motion { samples, seconds } => motion_features(samples, seconds),
        ChannelWindow::Visual(frames) => visual_features(frames),
    }
}

pub fn motion_features(samples: &[MotionSample], seconds: f64) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mut planner = FftPlanner::new();
    let mut out = Vec::with_capacity(MOTION_FEATURES);
    for axis in 0..6 {
        let x: Vec<f64> = samples
            .iter()
            .map(|s| if axis < 3 { s.accel[axis] } else { s.gyro[axis - 3] })
            .collect();
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let jerk = x.windows(2).map(|p| (p[1] - p[0]).powi(2)).sum::<f64>() / n;
        out.extend([mean, var.sqrt(), jerk, dominant_frequency(&mut planner, &x, mean, seconds)]);
    }
    Ok(out)
}

/// Frequency (Hz) of the strongest non-DC bin; 0 for a flat signal.
fn dominant_frequency(planner: &mut FftPlanner<f64>, x: &[f64], mean: f64, seconds: f64) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let mut buf: Vec<Complex<f64>> = x.iter().map(|v| Complex::new(v - mean, 0.0)).collect();
    planner.plan_fft_forward(buf.len()).process(&mut buf);
    let mut best = (0usize, 1e-9 * x.len() as f64);
    for (k, c) in buf.iter().enumerate().take(x.len() / 2 + 1).skip(1) {
        let power = c.norm();
        if power > best.1 {
            best = (k, power);
        }
    }
    best.0 as f64 / seconds
}

pub fn visual_features(frames: &[KeypointFrame]) -> Result<Vec<f64>> {
    if frames.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mut out = Vec::with_capacity(VISUAL_FEATURES);
    for group in keypoints::GROUPS {
        // Mean keypoint speed of the group between consecutive frames.
        let speeds: Vec<f64> = frames
            .windows(2)
            .filter_map(|pair| {
                let dt = pair[1].t - pair[0].t;
                let moves: Vec<f64> = group
                    .iter()
                    .filter_map(|name| {
                        let (a, b) = (pair[0].get(name)?, pair[1].get(name)?);
                        Some((b[0] - a[0]).hypot(b[1] - a[1]) / dt)
                    })
                    .collect();
                (!moves.is_empty()).then(|| moves.iter().sum::<f64>() / moves.len() as f64)
            })
            .collect();
        let (mean, std) = mean_std(&speeds);
        out.extend([mean, std]);
    }
    let spreads: Vec<f64> = frames
        .iter()
        .filter_map(|f| {
            let pts: Vec<[f64; 2]> = f.keypoints.values().filter_map(|p| *p).collect();
            if pts.len() < 2 {
                return None;
            }
            let n = pts.len() as f64;
            let cx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
            let cy = pts.iter().map(|p| p[1]).sum::<f64>() / n;
            Some(pts.iter().map(|p| (p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sum::<f64>() / n)
        })
        .collect();
    out.push(mean_std(&spreads).0);
    Ok(out)
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (0.0, 0.0);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}
