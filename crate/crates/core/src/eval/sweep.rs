use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{evaluate, ConfigEcho, EvalReport};
use crate::correlate::{correlate, FilterConfig, LabelSet};
use crate::error::{Error, Result};
use crate::synth::{coarsen_dataset, Cohort};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub w: f64,
    pub t_norm: f64,
    pub report: EvalReport,
}

/// Window-length multiples of the cohort resolution.
fn factor_of(w: f64, base: f64) -> Result<usize> {
    let f = w / base;
    let r = f.round();
    if r < 1.0 || (f - r).abs() > 1e-9 {
        return Err(Error::config(
            "w_values",
            format!("{w} s is not a positive multiple of the cohort window {base} s"),
        ));
    }
    Ok(r as usize)
}

/// Full factorial `(w, t)` grid. Longer windows are formed by merging runs
/// of cohort windows.
pub fn sweep_parameters(
    cohort: &Cohort,
    w_values: &[f64],
    t_values: &[f64],
    restricted_set: Option<LabelSet>,
    min_observed_fraction: f64,
) -> Result<Vec<SweepCell>> {
    let base = cohort
        .visual
        .window_seconds()
        .ok_or_else(|| Error::InvalidDataset("empty cohort".into()))?;
    let factors = w_values.iter().map(|w| factor_of(*w, base)).collect::<Result<Vec<_>>>()?;
    let grid: Vec<(usize, f64)> = factors
        .iter()
        .flat_map(|f| t_values.iter().map(move |t| (*f, *t)))
        .collect();
    grid.into_par_iter()
        .map(|(factor, t_norm)| {
            let cfg = FilterConfig {
                t_norm,
                restricted_set,
                budget_override: None,
            };
            let visual = coarsen_dataset(&cohort.visual, factor)?;
            let motion = coarsen_dataset(&cohort.motion, factor)?;
            let lists = correlate(&visual, &motion, &cfg, min_observed_fraction)?;
            let w = base * factor as f64;
            let report = evaluate(&lists, &cohort.truth, 3)?.with_config(ConfigEcho {
                w: Some(w),
                t_norm: Some(t_norm),
                restricted_set,
                min_observed_fraction: Some(min_observed_fraction),
            });
            Ok(SweepCell { w, t_norm, report })
        })
        .collect()
}

/// One row per cell.
pub fn write_sweep_csv<W: Write>(cells: &[SweepCell], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["w", "t_norm", "avatars", "correct", "incorrect", "none", "top_1_rate", "top_3_rate"])?;
    for c in cells {
        let r = &c.report;
        w.write_record([
            c.w.to_string(),
            c.t_norm.to_string(),
            r.avatars.to_string(),
            r.correct.to_string(),
            r.incorrect.to_string(),
            r.none.to_string(),
            r.top_1_rate.to_string(),
            r.top_3_rate.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Long format for plotting: `(w, t_norm, outcome, fraction)`.
pub fn write_sweep_long<W: Write>(cells: &[SweepCell], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["w", "t_norm", "outcome", "fraction"])?;
    for c in cells {
        for (name, v) in [
            ("correct", c.report.correct),
            ("incorrect", c.report.incorrect),
            ("none", c.report.none),
        ] {
            w.write_record([c.w.to_string(), c.t_norm.to_string(), name.to_string(), v.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate_cohort, field_like_motion_cm, field_like_visual_cm, CohortSpec};

    #[test]
    fn noiseless_grid_is_perfect() {
        let mut spec = CohortSpec::new(15, 40, 2);
        spec.magnitude_noise_sd = 0.3;
        let cohort = generate_cohort(&spec).unwrap();
        let cells = sweep_parameters(&cohort, &[1.0, 2.0, 4.0], &[0.0, 0.3, 1.0], None, 0.5).unwrap();
        assert_eq!(cells.len(), 9);
        for c in &cells {
            assert_eq!(c.report.top_1_rate, 1.0, "w={} t={}", c.w, c.t_norm);
        }
        assert!(sweep_parameters(&cohort, &[1.5], &[0.3], None, 0.5).is_err());
    }

    #[test]
    fn endpoints_with_noisy_channels() {
        let mut spec = CohortSpec::new(30, 40, 5);
        spec.motion_cm = field_like_motion_cm();
        spec.visual_cm = field_like_visual_cm();
        spec.magnitude_noise_sd = 0.3;
        let cohort = generate_cohort(&spec).unwrap();
        let cells = sweep_parameters(&cohort, &[1.0, 2.0], &[0.0, 1.0], None, 0.5).unwrap();
        for c in &cells {
            if c.t_norm == 1.0 {
                assert_eq!(c.report.none, 0.0);
            } else {
                assert!(c.report.none > 0.9, "{}", c.report.none);
            }
        }
        let mut long = Vec::new();
        write_sweep_long(&cells, &mut long).unwrap();
        assert_eq!(String::from_utf8(long).unwrap().lines().count(), 1 + 3 * cells.len());
    }
}
