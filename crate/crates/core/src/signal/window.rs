use std::ops::Range;

use super::trace::Timestamped;
use crate::error::{Error, Result};

/// Slack for floating-point timestamps sitting exactly on a window edge.
const EDGE_EPS: f64 = 1e-7;

/// A contiguous window `[start, start + w)` on a fixed grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    /// Grid index relative to the grid origin.
    pub index: usize,
    pub start: f64,
    /// Indices of the samples falling inside the window.
    pub range: Range<usize>,
}

/// Splits a trace into `floor(duration / w)` non-overlapping windows aligned
/// to its first timestamp; the trailing remainder shorter than `w` is dropped.
pub fn segment_windows<T: Timestamped>(items: &[T], interval: f64, w: f64) -> Result<Vec<Window>> {
    check_w(w)?;
    let Some(first) = items.first() else {
        return Err(Error::TraceTooShort { duration: 0.0, w });
    };
    let duration = items[items.len() - 1].timestamp() - first.timestamp() + interval;
    match segment_on_grid(items, interval, first.timestamp(), w) {
        Some(windows) => Ok(windows),
        None => Err(Error::TraceTooShort { duration, w }),
    }
}

/// Windows of the grid `origin + i·w` (i ≥ 0) fully covered by the trace.
/// `None` when no grid window is covered.
pub fn segment_on_grid<T: Timestamped>(
    items: &[T],
    interval: f64,
    origin: f64,
    w: f64,
) -> Option<Vec<Window>> {
    let first = items.first()?.timestamp();
    let end = items[items.len() - 1].timestamp() + interval;
    let lo = ((first - origin) / w - EDGE_EPS).ceil().max(0.0);
    let hi = ((end - origin) / w + EDGE_EPS).floor();
    if hi <= lo || hi.is_nan() {
        return None;
    }
    let (lo, hi) = (lo as usize, hi as usize);
    let windows = (lo..hi)
        .map(|i| {
            let start = origin + i as f64 * w;
            let stop = start + w;
            let a = items.partition_point(|s| s.timestamp() < start - EDGE_EPS);
            let b = items.partition_point(|s| s.timestamp() < stop - EDGE_EPS);
            Window {
                index: i,
                start,
                range: a..b,
            }
        })
        .collect();
    Some(windows)
}

fn check_w(w: f64) -> Result<()> {
    if w.is_finite() && w > 0.0 {
        Ok(())
    } else {
        Err(Error::config("w", format!("window length must be positive, got {w}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[derive(Clone, Copy)]
    struct T(f64);
    impl Timestamped for T {
        fn timestamp(&self) -> f64 {
            self.0
        }
    }

    fn trace(duration: f64, dt: f64) -> Vec<T> {
        let n = (duration / dt).round() as usize;
        (0..n).map(|i| T(i as f64 * dt)).collect()
    }

    #[test]
    fn window_counts() {
        assert_eq!(segment_windows(&trace(60.0, 0.02), 0.02, 1.0).unwrap().len(), 60);
        assert_eq!(segment_windows(&trace(10.7, 0.02), 0.02, 2.0).unwrap().len(), 5);
        assert!(matches!(
            segment_windows(&trace(0.4, 0.02), 0.02, 0.5),
            Err(Error::TraceTooShort { .. })
        ));
        assert!(segment_windows(&trace(1.0, 0.02), 0.02, 0.0).is_err());
    }

    #[test]
    fn windows_hold_expected_samples() {
        let ws = segment_windows(&trace(3.0, 0.02), 0.02, 1.0).unwrap();
        for w in &ws {
            assert_eq!(w.range.len(), 50);
        }
        assert_eq!(ws[1].range, 50..100);
    }

    #[test]
    fn grid_skips_uncovered_windows() {
        let items: Vec<T> = (0..300).map(|i| T(2.4 + i as f64 * 0.02)).collect();
        let ws = segment_on_grid(&items, 0.02, 0.0, 1.0).unwrap();
        assert_eq!(ws.first().unwrap().index, 3);
        assert_eq!(ws.last().unwrap().index, 7);
        assert!(segment_on_grid(&items, 0.02, 100.0, 1.0).is_none());
    }

    proptest! {
        #[test]
        fn coverage_is_contiguous(n in 1usize..500, dt in 0.005f64..0.1, w in 0.05f64..3.0) {
            let items: Vec<T> = (0..n).map(|i| T(1.0 + i as f64 * dt)).collect();
            let duration = n as f64 * dt;
            match segment_windows(&items, dt, w) {
                Ok(ws) => {
                    prop_assert_eq!(ws.len(), (duration / w + 1e-7).floor() as usize);
                    for (i, pair) in ws.windows(2).enumerate() {
                        prop_assert_eq!(pair[0].range.end, pair[1].range.start);
                        prop_assert!((pair[1].start - pair[0].start - w).abs() < 1e-9, "gap at {}", i);
                    }
                    prop_assert_eq!(ws[0].range.start, 0);
                    prop_assert!((ws[0].start - 1.0).abs() < 1e-12);
                }
                Err(Error::TraceTooShort { .. }) => prop_assert!(duration < w + 1e-7),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
