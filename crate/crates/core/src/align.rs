//! Constant clock-offset correction between a motion trace and the visual
//! window grid.
//!
//! A candidate offset is applied to the motion timestamps and the trace is
//! re-windowed and reclassified on the visual grid, so sub-window offsets
//! change window contents the way a physical misalignment does. The offset
//! with the fewest activity mismatches over the common windows wins.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlate::{
    hamming_distance, ranking_order, score_pair, FilterConfig, RankedEntry, RankedIdentityList,
};
use crate::error::{Error, Result};
use crate::model::{ActivityVectorSeries, Dataset};
use crate::signal::{build_motion_on_grid, Classifier, MotionSample, MotionTrace, SavGolConfig};

pub const DEFAULT_DELTA_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlignmentConfig {
    /// Offsets are searched in `[-delta_max, +delta_max]` seconds.
    pub delta_max: f64,
    pub step: f64,
    /// Start of visual window 0 on the shared clock.
    #[serde(default)]
    pub origin: f64,
}

impl AlignmentConfig {
    /// Default bound with a half-window step.
    pub fn for_window(w: f64) -> Self {
        AlignmentConfig {
            delta_max: DEFAULT_DELTA_MAX,
            step: w / 2.0,
            origin: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::config("step", format!("must be positive, got {}", self.step)));
        }
        if !(self.delta_max.is_finite() && self.step <= self.delta_max) {
            return Err(Error::config(
                "delta_max",
                format!("must be finite and at least step ({}), got {}", self.step, self.delta_max),
            ));
        }
        Ok(())
    }

    /// Grid offsets in ascending order, always including 0.
    pub fn offsets(&self) -> Vec<f64> {
        let n = (self.delta_max / self.step + 1e-9).floor() as i64;
        (-n..=n).map(|i| i as f64 * self.step).collect()
    }
}

/// A motion series rebuilt on the visual grid: window `i` of `series` is
/// grid window `first_window + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSeries {
    pub first_window: usize,
    pub series: ActivityVectorSeries,
}

impl GridSeries {
    /// Visual and motion slices over the windows both cover.
    pub fn common_with(&self, visual: &ActivityVectorSeries) -> Option<(ActivityVectorSeries, ActivityVectorSeries)> {
        let start = self.first_window;
        let end = visual.len().min(start + self.series.len());
        (end > start).then(|| (visual.slice(start, end), self.series.slice(0, end - start)))
    }
}

/// Moves every motion timestamp by `offset` and rebuilds on the grid
/// `origin + i·w`.
#[allow(clippy::too_many_arguments)]
pub fn shift_and_rebuild<C: Classifier + ?Sized>(
    trace: &MotionTrace,
    offset: f64,
    origin: f64,
    w: f64,
    model: &C,
    smoothing: &SavGolConfig,
    source_id: &str,
) -> Result<GridSeries> {
    if offset.abs() > trace.duration() - w + 1e-9 {
        return Err(Error::NoOverlap { offset });
    }
    match build_motion_on_grid(&trace.shifted(offset), origin, w, model, smoothing, source_id)? {
        Some((first_window, series)) => Ok(GridSeries { first_window, series }),
        None => Err(Error::NoOverlap { offset }),
    }
}

/// Delays a trace by `delay` seconds and keeps only samples inside
/// `[start, end)`, simulating a device clock that is off by `delay`.
pub fn inject_delay(trace: &MotionTrace, delay: f64, start: f64, end: f64) -> Result<MotionTrace> {
    let samples: Vec<MotionSample> = trace
        .shifted(delay)
        .samples()
        .iter()
        .filter(|s| s.t >= start - 1e-9 && s.t < end - 1e-9)
        .copied()
        .collect();
    MotionTrace::new(samples, trace.nominal_interval())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub offset: f64,
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentReport {
    pub offset: f64,
    pub distance: usize,
    pub common_windows: usize,
    pub distance_curve: Vec<CurvePoint>,
}

impl AlignmentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

/// Fewer mismatches first, then smaller `|offset|`, then negative offsets.
fn offset_order(a: (f64, usize), b: (f64, usize)) -> Ordering {
    a.1.cmp(&b.1)
        .then(a.0.abs().total_cmp(&b.0.abs()))
        .then(a.0.total_cmp(&b.0))
}

fn mismatch(visual: &ActivityVectorSeries, grid: &GridSeries) -> Result<(usize, usize)> {
    let (v, m) = grid
        .common_with(visual)
        .ok_or(Error::NoOverlap { offset: f64::NAN })?;
    let h = hamming_distance(v.activities(), m.activities(), None)?;
    Ok((h.distance, v.len()))
}

/// Exhaustive search over the offset grid for the offset minimizing the
/// activity Hamming distance to `visual` over the common windows.
pub fn align_offset_search<C: Classifier + Sync + ?Sized>(
    motion: &MotionTrace,
    visual: &ActivityVectorSeries,
    cfg: &AlignmentConfig,
    w: f64,
    model: &C,
    smoothing: &SavGolConfig,
) -> Result<AlignmentReport> {
    cfg.validate()?;
    let evaluated = cfg
        .offsets()
        .into_par_iter()
        .map(|offset| {
            let grid = shift_and_rebuild(motion, offset, cfg.origin, w, model, smoothing, "")?;
            let (distance, common) = mismatch(visual, &grid).map_err(|_| Error::NoOverlap { offset })?;
            Ok((offset, distance, common))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = evaluated
        .iter()
        .copied()
        .min_by(|a, b| offset_order((a.0, a.1), (b.0, b.1)))
        .expect("offset grid is never empty");
    Ok(AlignmentReport {
        offset: best.0,
        distance: best.1,
        common_windows: best.2,
        distance_curve: evaluated
            .into_iter()
            .map(|(offset, distance, _)| CurvePoint { offset, distance })
            .collect(),
    })
}

/// Whether one offset is searched per avatar/identity pair or shared by all
/// pairs of an identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OffsetScope {
    #[default]
    PerPair,
    PerIdentity,
}

/// Aligns every identity trace against every avatar, then filters and ranks
/// each pair over its common windows. Per identity the trace is rebuilt
/// once per grid offset.
#[allow(clippy::too_many_arguments)]
pub fn correlate_aligned<C: Classifier + Sync + ?Sized>(
    visual: &Dataset,
    traces: &[(String, MotionTrace)],
    align: &AlignmentConfig,
    scope: OffsetScope,
    filter: &FilterConfig,
    min_observed_fraction: f64,
    model: &C,
    smoothing: &SavGolConfig,
) -> Result<Vec<RankedIdentityList>> {
    align.validate()?;
    filter.validate()?;
    let w = visual
        .window_seconds()
        .ok_or_else(|| Error::InvalidDataset("empty visual dataset".into()))?;
    let offsets = align.offsets();
    let rebuilt: Vec<Vec<GridSeries>> = traces
        .par_iter()
        .map(|(id, trace)| {
            offsets
                .iter()
                .map(|&o| shift_and_rebuild(trace, o, align.origin, w, model, smoothing, id))
                .collect()
        })
        .collect::<Result<_>>()?;

    // distances[identity][avatar][offset]
    let distances: Vec<Vec<Vec<usize>>> = rebuilt
        .par_iter()
        .map(|grids| {
            visual
                .series()
                .iter()
                .map(|v| grids.iter().map(|g| mismatch(v, g).map(|d| d.0)).collect())
                .collect()
        })
        .collect::<Result<_>>()?;
    let pick = |ds: &[usize]| -> usize {
        (0..offsets.len())
            .min_by(|&a, &b| offset_order((offsets[a], ds[a]), (offsets[b], ds[b])))
            .expect("offset grid is never empty")
    };
    let shared: Vec<usize> = distances
        .iter()
        .map(|per_avatar| {
            let best_per_offset: Vec<usize> = (0..offsets.len())
                .map(|o| per_avatar.iter().map(|d| d[o]).min().unwrap_or(usize::MAX))
                .collect();
            pick(&best_per_offset)
        })
        .collect();

    visual
        .series()
        .par_iter()
        .enumerate()
        .map(|(a, v)| {
            let mut entries = Vec::new();
            for (j, grids) in rebuilt.iter().enumerate() {
                let o = match scope {
                    OffsetScope::PerPair => pick(&distances[j][a]),
                    OffsetScope::PerIdentity => shared[j],
                };
                let (vs, ms) = grids[o].common_with(v).ok_or(Error::NoOverlap { offset: offsets[o] })?;
                if filter.admits(vs.activities(), ms.activities())?.is_none() {
                    continue;
                }
                let mags = ms.motion_magnitudes().expect("rebuilt series are motion series");
                if let Some(score) = score_pair(&vs, &mags, min_observed_fraction)? {
                    entries.push(RankedEntry {
                        identity: traces[j].0.clone(),
                        rho: score.rho,
                        position: score.position,
                    });
                }
            }
            entries.sort_by(ranking_order);
            Ok(RankedIdentityList {
                avatar: v.source_id().to_string(),
                entries,
            })
        })
        .collect()
}
