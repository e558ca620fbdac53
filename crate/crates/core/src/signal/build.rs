use super::classifier::Classifier;
use super::features::{motion_features, visual_features};
use super::magnitude::{motion_magnitude, visual_magnitude};
use super::savgol::{savgol_smooth, SavGolConfig};
use super::trace::{KeypointTrace, MotionSample, MotionTrace};
use super::window::{segment_on_grid, segment_windows, Window};
use crate::error::{Error, Result};
use crate::model::{ActivityVectorSeries, Channel, Magnitude, MagnitudeSeq, SensorPosition};

#[derive(Debug, Clone, Copy)]
pub enum Trace<'a> {
    Motion(&'a MotionTrace),
    Visual(&'a KeypointTrace),
}

/// Windows, smooths, classifies and measures a raw trace using the default
/// smoothing configuration.
pub fn build_series<C: Classifier + ?Sized>(
    trace: Trace<'_>,
    w: f64,
    model: &C,
    source_id: &str,
) -> Result<ActivityVectorSeries> {
    build_series_with(trace, w, model, &SavGolConfig::default(), source_id)
}

pub fn build_series_with<C: Classifier + ?Sized>(
    trace: Trace<'_>,
    w: f64,
    model: &C,
    smoothing: &SavGolConfig,
    source_id: &str,
) -> Result<ActivityVectorSeries> {
    match trace {
        Trace::Motion(t) => {
            let windows = segment_windows(t.samples(), t.nominal_interval(), w)?;
            motion_series(t, &windows, w, model, smoothing, source_id)
        }
        Trace::Visual(t) => {
            check_channel(model, Channel::Visual)?;
            let windows = segment_windows(t.frames(), t.frame_interval(), w)?;
            let frames = t.frames();
            let mut activities = Vec::with_capacity(windows.len());
            let mut mags: [Vec<Magnitude>; SensorPosition::COUNT] = Default::default();
            for win in &windows {
                let slice = &frames[win.range.clone()];
                activities.push(model.classify(&visual_features(slice)?)?);
                for p in SensorPosition::ALL {
                    mags[p.index()].push(visual_magnitude(slice, p)?);
                }
            }
            let mut seqs: [MagnitudeSeq; SensorPosition::COUNT] = Default::default();
            for (dst, src) in seqs.iter_mut().zip(mags) {
                *dst = MagnitudeSeq::new(src)?;
            }
            ActivityVectorSeries::visual(source_id, w, activities, seqs)
        }
    }
}

/// Builds a motion series on the external grid `origin + i·w`, keeping only
/// grid windows the trace covers completely. Returns the grid index of the
/// first window, or `None` when the trace covers no grid window.
pub fn build_motion_on_grid<C: Classifier + ?Sized>(
    trace: &MotionTrace,
    origin: f64,
    w: f64,
    model: &C,
    smoothing: &SavGolConfig,
    source_id: &str,
) -> Result<Option<(usize, ActivityVectorSeries)>> {
    let Some(windows) = segment_on_grid(trace.samples(), trace.nominal_interval(), origin, w) else {
        return Ok(None);
    };
    let first = windows[0].index;
    motion_series(trace, &windows, w, model, smoothing, source_id).map(|s| Some((first, s)))
}

fn check_channel<C: Classifier + ?Sized>(model: &C, channel: Channel) -> Result<()> {
    if model.channel() != channel {
        return Err(Error::InvalidModel(format!(
            "a {} model cannot classify {channel} windows",
            model.channel()
        )));
    }
    Ok(())
}

fn motion_series<C: Classifier + ?Sized>(
    trace: &MotionTrace,
    windows: &[Window],
    w: f64,
    model: &C,
    smoothing: &SavGolConfig,
    source_id: &str,
) -> Result<ActivityVectorSeries> {
    check_channel(model, Channel::Motion)?;
    let smoothed = smooth_trace(trace.samples(), smoothing)?;
    let mut activities = Vec::with_capacity(windows.len());
    let mut magnitudes = Vec::with_capacity(windows.len());
    for win in windows {
        let slice = &smoothed[win.range.clone()];
        activities.push(model.classify(&motion_features(slice, w)?)?);
        magnitudes.push(motion_magnitude(slice)?);
    }
    ActivityVectorSeries::motion(source_id, w, activities, magnitudes)
}

/// Smooths all six axes; traces shorter than the filter pass through as-is.
pub fn smooth_trace(samples: &[MotionSample], cfg: &SavGolConfig) -> Result<Vec<MotionSample>> {
    cfg.validate()?;
    if samples.len() < cfg.window_len {
        return Ok(samples.to_vec());
    }
    let mut out = samples.to_vec();
    for axis in 0..6 {
        let x: Vec<f64> = samples
            .iter()
            .map(|s| if axis < 3 { s.accel[axis] } else { s.gyro[axis - 3] })
            .collect();
        let y = savgol_smooth(&x, cfg.window_len, cfg.poly_order)?;
        for (s, v) in out.iter_mut().zip(y) {
            if axis < 3 {
                s.accel[axis] = v;
            } else {
                s.gyro[axis - 3] = v;
            }
        }
    }
    Ok(out)
}
