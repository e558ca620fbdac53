use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::correlate::{activity_filter, CandidatePairSet, FilterConfig};
use crate::error::{Error, Result};
use crate::index::{estimate_bytes, filter_with_index_capped};
use crate::model::{ActivityVectorSeries, Dataset, MagnitudeSeq};
use crate::seed;
use crate::signal::{apply_confusion, ConfusionMatrix};
use crate::synth::{avatar_id, generate_script, identity_id, permute_expand, CohortSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Indexed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    /// Above the naive size cutoff.
    Skipped,
    /// Index would exceed the memory cap.
    Refused,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub p: usize,
    pub q: usize,
    pub k: usize,
    pub t_abs: usize,
    pub method: Method,
    pub status: RowStatus,
    pub wall_time_ms: Option<f64>,
    pub pairs_retained: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<(usize, usize)>,
    pub k: usize,
    pub t_abs: usize,
    pub methods: Vec<Method>,
    /// Naive rows with `p·q` above this are skipped.
    pub naive_cutoff: u128,
    pub memory_cap: u64,
    /// Timed runs per row; the fastest is reported.
    pub repeats: usize,
    pub seed: u64,
}

impl BenchConfig {
    pub fn new(sizes: Vec<(usize, usize)>, k: usize, t_abs: usize) -> Self {
        BenchConfig {
            sizes,
            k,
            t_abs,
            methods: vec![Method::Naive, Method::Indexed],
            naive_cutoff: 10_000_000_000,
            memory_cap: crate::index::memory_cap_from_env(),
            repeats: 1,
            seed: 0,
        }
    }
}

/// Number of distinct scripts that benchmark datasets are expanded from.
pub const BENCH_SEED_SCRIPTS: usize = 271;

/// `q` motion sequences expanded by permutation from synthetic scripts and
/// `p` visual sequences observed through a mildly noisy label channel.
pub fn bench_datasets(p: usize, q: usize, k: usize, seed: u64) -> Result<(Dataset, Dataset)> {
    let spec = CohortSpec::new(BENCH_SEED_SCRIPTS, k, seed);
    let scripts: Vec<_> = (0..BENCH_SEED_SCRIPTS).map(|i| generate_script(&spec, i)).collect();
    let motion_seqs = permute_expand(&scripts, q, seed::derive(seed, "bench-motion", 0))?;
    let cm = ConfusionMatrix::from_diagonal([0.9; 8])?;
    let motion = motion_seqs
        .iter()
        .enumerate()
        .map(|(j, s)| ActivityVectorSeries::motion(identity_id(j, q), 1.0, s.clone(), vec![0.0; k]))
        .collect::<Result<Vec<_>>>()?;
    let visual = (0..p)
        .map(|i| {
            let src = if q == 0 {
                scripts[i % scripts.len()].clone()
            } else {
                motion_seqs[i % q].clone()
            };
            let labels = apply_confusion(&src, &cm, seed::derive(seed, "bench-visual", i as u64));
            let mags = std::array::from_fn(|_| MagnitudeSeq::unobservable(k));
            ActivityVectorSeries::visual(avatar_id(i, p), 1.0, labels, mags)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Dataset::visual(visual)?, Dataset::motion(motion)?))
}

fn timed<F: FnMut() -> Result<CandidatePairSet>>(repeats: usize, mut f: F) -> Result<(f64, usize)> {
    let mut best = f64::INFINITY;
    let mut pairs = 0;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let set = f()?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        pairs = set.pair_count();
        drop(set);
        best = best.min(ms);
    }
    // Sub-resolution timings are reported as the clock tick.
    Ok((best.max(1e-6), pairs))
}

/// Times the filtering stage only, single-threaded, per size and method.
pub fn bench_scaling(cfg: &BenchConfig) -> Result<Vec<ScalingRow>> {
    if cfg.t_abs > cfg.k {
        return Err(Error::BudgetExceedsLength { t_abs: cfg.t_abs, k: cfg.k });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::config("threads", e.to_string()))?;
    let filter = FilterConfig {
        t_norm: 1.0,
        restricted_set: None,
        budget_override: Some(cfg.t_abs),
    };
    let mut rows = Vec::new();
    for &(p, q) in &cfg.sizes {
        let mut pending: Vec<ScalingRow> = cfg
            .methods
            .iter()
            .map(|&method| {
                let status = match method {
                    Method::Naive if p as u128 * q as u128 > cfg.naive_cutoff => RowStatus::Skipped,
                    Method::Indexed if estimate_bytes(q, cfg.k, cfg.t_abs) > cfg.memory_cap => RowStatus::Refused,
                    _ => RowStatus::Ok,
                };
                ScalingRow {
                    p,
                    q,
                    k: cfg.k,
                    t_abs: cfg.t_abs,
                    method,
                    status,
                    wall_time_ms: None,
                    pairs_retained: None,
                }
            })
            .collect();
        if pending.iter().any(|r| r.status == RowStatus::Ok) {
            let (visual, motion) = bench_datasets(p, q, cfg.k, cfg.seed)?;
            for row in pending.iter_mut().filter(|r| r.status == RowStatus::Ok) {
                let result = pool.install(|| match row.method {
                    Method::Naive => timed(cfg.repeats, || activity_filter(&visual, &motion, &filter)),
                    Method::Indexed => timed(cfg.repeats, || {
                        filter_with_index_capped(&visual, &motion, cfg.t_abs, cfg.memory_cap)
                    }),
                });
                match result {
                    Ok((ms, pairs)) => {
                        row.wall_time_ms = Some(ms);
                        row.pairs_retained = Some(pairs);
                    }
                    Err(Error::MemoryCap { .. }) => row.status = RowStatus::Refused,
                    Err(e) => return Err(e),
                }
            }
        }
        rows.extend(pending);
    }
    Ok(rows)
}

pub fn write_scaling_csv<W: Write>(rows: &[ScalingRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["p", "q", "k", "t_abs", "method", "status", "wall_time_ms", "pairs_retained"])?;
    for r in rows {
        let method = match r.method {
            Method::Naive => "naive",
            Method::Indexed => "indexed",
        };
        let status = match r.status {
            RowStatus::Ok => "ok",
            RowStatus::Skipped => "skipped",
            RowStatus::Refused => "refused",
        };
        w.write_record([
            r.p.to_string(),
            r.q.to_string(),
            r.k.to_string(),
            r.t_abs.to_string(),
            method.to_string(),
            status.to_string(),
            r.wall_time_ms.map(|v| format!("{v:.3}")).unwrap_or_default(),
            r.pairs_retained.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(LinearFit { slope, intercept, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 5.0, 7.0, 9.0];
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        let noisy = linear_fit(&xs, &[1.0, -1.0, 1.0, -1.0]).unwrap();
        assert!(noisy.r_squared < 0.5);
        assert!(linear_fit(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn small_bench_agrees_and_skips() {
        let mut cfg = BenchConfig::new(vec![(100, 100), (300, 200)], 5, 2);
        cfg.naive_cutoff = 20_000;
        cfg.memory_cap = u64::MAX;
        let rows = bench_scaling(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].pairs_retained, rows[1].pairs_retained);
        assert!(rows[0].pairs_retained.unwrap() >= 90);
        assert_eq!(rows[2].status, RowStatus::Skipped);
        assert_eq!(rows[3].status, RowStatus::Ok);
        let again = bench_scaling(&cfg).unwrap();
        let pairs = |r: &[ScalingRow]| r.iter().map(|x| x.pairs_retained).collect::<Vec<_>>();
        assert_eq!(pairs(&rows), pairs(&again));

        cfg.memory_cap = 1000;
        let refused = bench_scaling(&cfg).unwrap();
        assert_eq!(refused[1].status, RowStatus::Refused);
        assert_eq!(refused[0].pairs_retained, rows[0].pairs_retained);

        // Neither row runs, so no dataset of this size is ever built.
        let huge = BenchConfig {
            sizes: vec![(1_000_000, 1_000_000)],
            memory_cap: 1 << 20,
            ..cfg.clone()
        };
        let r = bench_scaling(&huge).unwrap();
        assert_eq!((r[0].status, r[1].status), (RowStatus::Skipped, RowStatus::Refused));
        let mut csv = Vec::new();
        write_scaling_csv(&refused, &mut csv).unwrap();
        assert!(String::from_utf8(csv).unwrap().contains("indexed,refused,,"));
    }
}
