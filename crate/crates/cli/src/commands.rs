use std::path::{Path, PathBuf};

use rayon::prelude::*;

use kinelink::align::{align_offset_search, correlate_aligned, AlignmentConfig};
use kinelink::correlate::{
    check_uniform, correlate as correlate_naive, mismatch_budget, rank_candidates, read_rankings_jsonl,
    write_rankings_jsonl, FilterConfig,
};
use kinelink::eval::{
    bench_scaling, evaluate as evaluate_rankings, sweep_parameters, write_scaling_csv, write_sweep_csv,
    write_sweep_long, BenchConfig, ConfigEcho, Method,
};
use kinelink::index::{filter_with_index_capped, memory_cap_from_env};
use kinelink::signal::{build_series_with, ClassifierModel, KeypointTrace, MotionTrace, SavGolConfig, Trace};
use kinelink::synth::spec::default_magnitude_base;
use kinelink::synth::{
    generate_session, session_motion_trace, train_motion_classifier, train_visual_classifier, CohortSpec,
    GroundTruth,
};
use kinelink::{Channel, Dataset, Error, LabelSet, Result};

use crate::config::{IndexMode, RunConfig};
use crate::{
    create, io_at, open, read_string, write_file, AlignArgs, BenchArgs, BuildSeriesArgs, ChannelArg, CorrelateArgs,
    EvaluateArgs, FitClassifierArgs, GenerateArgs, MethodArg, SweepArgs,
};

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| io_at(path, e))
}

fn load_model(path: &Path) -> Result<ClassifierModel> {
    ClassifierModel::from_json(&read_string(path)?)
}

fn load_spec(path: &Path) -> Result<CohortSpec> {
    CohortSpec::from_json(&read_string(path)?)
}

fn stem(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_string)
        .ok_or_else(|| Error::config("trace", format!("cannot derive an id from {}", path.display())))
}

pub fn generate(a: &GenerateArgs) -> Result<String> {
    let mut spec = load_spec(&a.spec)?;
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    let cohort = generate_session(&spec, a.session)?;
    create_dir(&a.out_dir)?;
    cohort.visual.write_jsonl(create(&a.out_dir.join("visual.jsonl"))?)?;
    cohort.motion.write_jsonl(create(&a.out_dir.join("motion.jsonl"))?)?;
    write_file(&a.out_dir.join("truth.json"), &(cohort.truth.to_json() + "\n"))?;
    if a.traces {
        let dir = a.out_dir.join("traces");
        create_dir(&dir)?;
        cohort
            .motion
            .series()
            .par_iter()
            .enumerate()
            .try_for_each(|(i, s)| {
                let trace = session_motion_trace(&spec, i, a.session)?;
                trace.write_csv(create(&dir.join(format!("{}.csv", s.source_id())))?)
            })?;
    }
    Ok(format!(
        "generated p={} q={} k={}\n",
        cohort.visual.len(),
        cohort.motion.len(),
        cohort.motion.uniform_len().unwrap_or(spec.n_windows)
    ))
}

pub fn build_series(a: &BuildSeriesArgs) -> Result<String> {
    let model = load_model(&a.model)?;
    let smoothing = SavGolConfig {
        window_len: a.window_len,
        poly_order: a.poly_order,
    };
    let series = a
        .trace
        .par_iter()
        .map(|path| {
            let id = stem(path)?;
            match a.channel {
                ChannelArg::Motion => {
                    let t = MotionTrace::read_csv(open(path)?, a.sample_interval)?;
                    build_series_with(Trace::Motion(&t), a.w, &model, &smoothing, &id)
                }
                ChannelArg::Visual => {
                    let t = KeypointTrace::read_jsonl(open(path)?, a.frame_rate)?;
                    build_series_with(Trace::Visual(&t), a.w, &model, &smoothing, &id)
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let channel = match a.channel {
        ChannelArg::Motion => Channel::Motion,
        ChannelArg::Visual => Channel::Visual,
    };
    let dataset = Dataset::new(channel, series)?;
    dataset.write_jsonl(create(&a.out)?)?;
    Ok(format!("built {} {channel} series\n", dataset.len()))
}

pub fn align(a: &AlignArgs) -> Result<String> {
    let visual = Dataset::read_jsonl(Channel::Visual, open(&a.visual)?)?;
    let series = match &a.avatar {
        Some(id) => visual
            .series()
            .iter()
            .find(|s| s.source_id() == id)
            .ok_or_else(|| Error::InvalidDataset(format!("no avatar `{id}` in {}", a.visual.display())))?,
        None if visual.len() == 1 => &visual.series()[0],
        None => return Err(Error::config("avatar", "the visual file holds several avatars; pick one")),
    };
    let w = series.window_seconds();
    let cfg = AlignmentConfig {
        delta_max: a.delta_max,
        step: a.step.unwrap_or(w / 2.0),
        origin: a.origin,
    };
    let trace = MotionTrace::read_csv(open(&a.motion_trace)?, a.sample_interval)?;
    let model = load_model(&a.model)?;
    let report = align_offset_search(&trace, series, &cfg, w, &model, &SavGolConfig::default())?;
    write_file(&a.out, &(report.to_json() + "\n"))?;
    Ok(format!(
        "offset {} s: {} mismatches over {} windows\n",
        report.offset, report.distance, report.common_windows
    ))
}

fn required<'a>(p: &'a Option<PathBuf>, field: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::config(field, "no path given in the config or on the command line"))
}

fn check_window(dataset: &Dataset, w: f64) -> Result<()> {
    match dataset.window_seconds() {
        Some(ws) if (ws - w).abs() > 1e-9 => Err(Error::config(
            "w",
            format!("the {} series use {ws} s windows, the run asks for {w} s", dataset.channel()),
        )),
        _ => Ok(()),
    }
}

fn read_traces(dir: &Path, interval: f64) -> Result<Vec<(String, MotionTrace)>> {
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| io_at(dir, e))? {
        let path = entry.map_err(|e| io_at(dir, e))?.path();
        if path.extension().is_some_and(|x| x == "csv") {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        return Err(Error::InvalidDataset(format!("no .csv traces in {}", dir.display())));
    }
    paths.sort();
    paths
        .par_iter()
        .map(|p| Ok((stem(p)?, MotionTrace::read_csv(open(p)?, interval)?)))
        .collect()
}

pub fn resolve_run_config(a: &CorrelateArgs) -> Result<RunConfig> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::from_json(&read_string(p)?)?,
        None => RunConfig::default(),
    };
    let paths = [
        (&a.visual, &mut cfg.visual),
        (&a.motion, &mut cfg.motion),
        (&a.motion_traces, &mut cfg.motion_traces),
        (&a.model, &mut cfg.model),
        (&a.truth, &mut cfg.truth),
        (&a.report, &mut cfg.report),
        (&a.out, &mut cfg.out),
    ];
    for (flag, slot) in paths {
        if flag.is_some() {
            slot.clone_from(flag);
        }
    }
    if let Some(w) = a.w {
        cfg.w = w;
    }
    if let Some(t) = a.t_norm {
        cfg.t_norm = t;
    }
    if a.restricted {
        cfg.restricted = true;
    }
    if let Some(m) = a.index_mode {
        cfg.index_mode = m;
    }
    if let Some(f) = a.min_observed_fraction {
        cfg.min_observed_fraction = f;
    }
    cfg.validate()?;
    if cfg.report.is_some() && cfg.truth.is_none() {
        return Err(Error::config("report", "an evaluation report needs ground truth"));
    }
    Ok(cfg)
}

pub fn correlate(a: &CorrelateArgs) -> Result<String> {
    let cfg = resolve_run_config(a)?;
    let out = required(&cfg.out, "out")?;
    let visual = Dataset::read_jsonl(Channel::Visual, open(required(&cfg.visual, "visual")?)?)?;
    check_window(&visual, cfg.w)?;
    let filter = FilterConfig {
        t_norm: cfg.t_norm,
        restricted_set: cfg.restricted_set(),
        budget_override: None,
    };
    let lists = if let Some(dir) = &cfg.motion_traces {
        let model = load_model(required(&cfg.model, "model")?)?;
        let traces = read_traces(dir, cfg.sample_interval)?;
        let align = cfg.alignment.unwrap_or_else(|| AlignmentConfig::for_window(cfg.w));
        correlate_aligned(
            &visual,
            &traces,
            &align,
            cfg.offset_scope,
            &filter,
            cfg.min_observed_fraction,
            &model,
            &cfg.smoothing,
        )?
    } else {
        let motion = Dataset::read_jsonl(Channel::Motion, open(required(&cfg.motion, "motion")?)?)?;
        check_window(&motion, cfg.w)?;
        match cfg.index_mode {
            IndexMode::Naive => correlate_naive(&visual, &motion, &filter, cfg.min_observed_fraction)?,
            IndexMode::Indexed => {
                let k = check_uniform(&visual, &motion)?.ok_or_else(|| {
                    Error::InvalidDataset("indexed mode needs every series to have the same length".into())
                })?;
                let pairs = filter_with_index_capped(&visual, &motion, mismatch_budget(cfg.t_norm, k), memory_cap_from_env())?;
                rank_candidates(&visual, &motion, &pairs, cfg.min_observed_fraction)?
            }
        }
    };
    let mut summary = format!("ranked {} avatars\n", lists.len());
    let report = match &cfg.truth {
        Some(p) => {
            let truth = GroundTruth::from_json(&read_string(p)?)?;
            let report = evaluate_rankings(&lists, &truth, 3)?.with_config(ConfigEcho {
                w: Some(cfg.w),
                t_norm: Some(cfg.t_norm),
                restricted_set: cfg.restricted_set(),
                min_observed_fraction: Some(cfg.min_observed_fraction),
            });
            summary.push_str(&format!(
                "top_1_rate {} top_3_rate {} none {}\n",
                report.top_1_rate, report.top_3_rate, report.none
            ));
            Some(report)
        }
        None => None,
    };
    let outcomes = report.as_ref().map(|r| r.outcome_list());
    write_rankings_jsonl(create(out)?, &lists, outcomes.as_deref())?;
    if let (Some(path), Some(r)) = (&cfg.report, &report) {
        write_file(path, &(r.to_json() + "\n"))?;
    }
    Ok(summary)
}

pub fn evaluate(a: &EvaluateArgs) -> Result<String> {
    let lists = read_rankings_jsonl(open(&a.rankings)?)?;
    let truth = GroundTruth::from_json(&read_string(&a.truth)?)?;
    let report = evaluate_rankings(&lists, &truth, a.top_k)?;
    write_file(&a.out, &(report.to_json() + "\n"))?;
    if let Some(path) = &a.csv {
        report.write_csv(create(path)?)?;
    }
    Ok(format!(
        "avatars {} correct {} incorrect {} none {} top_{}_rate {}\n",
        report.avatars, report.correct, report.incorrect, report.none, report.top_k, report.top_k_rate
    ))
}

pub fn bench(a: &BenchArgs) -> Result<String> {
    let mut cfg = BenchConfig::new(a.sizes.0.clone(), a.k, a.t_abs);
    cfg.methods = a
        .methods
        .iter()
        .map(|m| match m {
            MethodArg::Naive => Method::Naive,
            MethodArg::Indexed => Method::Indexed,
        })
        .collect();
    cfg.naive_cutoff = a.naive_cutoff;
    cfg.repeats = a.repeats;
    cfg.seed = a.seed;
    let rows = bench_scaling(&cfg)?;
    write_scaling_csv(&rows, create(&a.out)?)?;
    Ok(format!("{} rows\n", rows.len()))
}

pub fn sweep(a: &SweepArgs) -> Result<String> {
    let spec = load_spec(&a.spec)?;
    let cohort = generate_session(&spec, a.session)?;
    let restricted = a.restricted.then(LabelSet::reduced);
    let cells = sweep_parameters(&cohort, &a.w_values, &a.t_values, restricted, a.min_observed_fraction)?;
    write_sweep_csv(&cells, create(&a.out)?)?;
    if let Some(path) = &a.long {
        write_sweep_long(&cells, create(path)?)?;
    }
    Ok(format!("{} cells\n", cells.len()))
}

pub fn fit_classifier(a: &FitClassifierArgs) -> Result<String> {
    let range = CohortSpec::new(1, 1, a.seed).intensity_range;
    let base = default_magnitude_base();
    let model = match a.channel {
        ChannelArg::Motion => train_motion_classifier(a.w, &base, range, a.seed)?,
        ChannelArg::Visual => train_visual_classifier(a.w, &base, range, a.seed)?,
    };
    write_file(&a.out, &(model.to_json() + "\n"))?;
    Ok(format!("fitted {} classifier\n", model.channel))
}
