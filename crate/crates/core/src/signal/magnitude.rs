use super::trace::{KeypointFrame, MotionSample};
use crate::error::{Error, Result};
use crate::model::{Magnitude, SensorPosition};

/// Standard gravity, m/s².
pub const GRAVITY: f64 = 9.81;

/// A position is unobservable when its proxy keypoint is missing in more
/// than this fraction of the window's frames.
pub const MAX_MISSING_FRACTION: f64 = 0.5;

/// Mean gravity-compensated acceleration magnitude `mean |‖a‖ − g|` (m/s²).
pub fn motion_magnitude(window: &[MotionSample]) -> Result<f64> {
    if window.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let total: f64 = window
        .iter()
        .map(|s| (norm3(s.accel) - GRAVITY).abs())
        .sum();
    Ok(total / window.len() as f64)
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Keypoint standing in for a sensor position: hips for pockets, wrists for
/// wrists.
pub fn proxy_keypoint(position: SensorPosition) -> &'static str {
    match position {
        SensorPosition::LeftFrontPocket | SensorPosition::LeftBackPocket => "left_hip",
        SensorPosition::RightFrontPocket | SensorPosition::RightBackPocket => "right_hip",
        SensorPosition::LeftWrist => "left_wrist",
        SensorPosition::RightWrist => "right_wrist",
    }
}

/// Mean acceleration magnitude (pixel/s²) of the position's proxy keypoint,
/// from second differences over consecutive frames where it is present.
pub fn visual_magnitude(window: &[KeypointFrame], position: SensorPosition) -> Result<Magnitude> {
    if window.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let name = proxy_keypoint(position);
    let points: Vec<Option<[f64; 2]>> = window.iter().map(|f| f.get(name)).collect();
    let missing = points.iter().filter(|p| p.is_none()).count();
    if missing as f64 > MAX_MISSING_FRACTION * window.len() as f64 {
        return Ok(Magnitude::Unobservable);
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for j in 1..window.len().saturating_sub(1) {
        let (Some(a), Some(b), Some(c)) = (points[j - 1], points[j], points[j + 1]) else {
            continue;
        };
        let (t0, t1, t2) = (window[j - 1].t, window[j].t, window[j + 1].t);
        let mut acc = [0.0; 2];
        for d in 0..2 {
            let v1 = (b[d] - a[d]) / (t1 - t0);
            let v2 = (c[d] - b[d]) / (t2 - t1);
            acc[d] = (v2 - v1) / ((t2 - t0) / 2.0);
        }
        sum += acc[0].hypot(acc[1]);
        count += 1;
    }
    if count == 0 {
        return Ok(Magnitude::Unobservable);
    }
    Ok(Magnitude::Observed(sum / count as f64))
}
