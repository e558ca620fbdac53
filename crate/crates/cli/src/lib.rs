//! The `kinelink` command line: cohort generation, series building,
//! alignment, correlation, evaluation, sweeps and the filtering benchmark.

pub mod commands;
pub mod config;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use kinelink::{Error, ErrorKind, Result};

pub use config::{IndexMode, RunConfig};

pub const EXIT_IO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_DATA: u8 = 4;
pub const EXIT_RESOURCE: u8 = 5;

pub fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Io => EXIT_IO,
        ErrorKind::Config => EXIT_CONFIG,
        ErrorKind::Data => EXIT_DATA,
        ErrorKind::Resource => EXIT_RESOURCE,
    }
}

/// Identifiers of every file schema the tool reads or writes.
pub const FORMAT_VERSIONS: &[(&str, &str)] = &[
    ("series", kinelink::model::SERIES_FORMAT_VERSION),
    ("rankings", kinelink::correlate::RANKING_FORMAT_VERSION),
    ("classifier", kinelink::signal::classifier::MODEL_FORMAT_VERSION),
    ("index-snapshot", kinelink::index::SNAPSHOT_FORMAT_VERSION),
    ("cohort-spec", "cohort-spec-json/1"),
    ("ground-truth", "ground-truth-json/1"),
    ("run-config", "run-config-json/1"),
    ("motion-trace", "motion-csv/1"),
    ("keypoint-trace", "keypoints-jsonl/1"),
    ("alignment-report", "alignment-json/1"),
    ("eval-report", "eval-report-json/1"),
    ("scaling", "scaling-csv/1"),
    ("sweep", "sweep-csv/1"),
];

pub fn version_text() -> String {
    let mut s = format!("kinelink {}\n", env!("CARGO_PKG_VERSION"));
    for (name, v) in FORMAT_VERSIONS {
        s.push_str(&format!("{name}: {v}\n"));
    }
    s
}

#[derive(Debug, Parser)]
#[command(name = "kinelink", about = "Link video avatars to motion-sensor identities", disable_version_flag = true)]
pub struct Cli {
    /// Worker threads for parallel stages; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print the version and the file format identifiers.
    #[arg(short = 'V', long)]
    pub version: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic cohort with ground truth.
    Generate(GenerateArgs),
    /// Build activity-vector series from raw traces.
    BuildSeries(BuildSeriesArgs),
    /// Search the clock offset between one motion trace and one avatar.
    Align(AlignArgs),
    /// Filter and rank identities for every avatar.
    Correlate(CorrelateArgs),
    /// Score rankings against ground truth.
    Evaluate(EvaluateArgs),
    /// Time naive and indexed filtering over dataset sizes.
    Bench(BenchArgs),
    /// Evaluate a cohort over a grid of window lengths and thresholds.
    Sweep(SweepArgs),
    /// Fit an activity classifier on synthetic training windows.
    FitClassifier(FitClassifierArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Motion,
    Visual,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Cohort spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Directory receiving visual.jsonl, motion.jsonl and truth.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub session: u64,
    /// Overrides the spec's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write each identity's inertial trace to traces/<id>.csv.
    #[arg(long)]
    pub traces: bool,
}

#[derive(Debug, Args)]
pub struct BuildSeriesArgs {
    #[arg(long, value_enum)]
    pub channel: ChannelArg,
    /// Trace files; the file stem becomes the series id.
    #[arg(long, required = true)]
    pub trace: Vec<PathBuf>,
    /// Classifier model (JSON).
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub w: f64,
    /// Nominal inertial sample interval in seconds.
    #[arg(long, default_value_t = kinelink::signal::trace::DEFAULT_SAMPLE_INTERVAL)]
    pub sample_interval: f64,
    #[arg(long, default_value_t = kinelink::signal::trace::DEFAULT_FRAME_RATE)]
    pub frame_rate: f64,
    #[arg(long, default_value_t = 11)]
    pub window_len: usize,
    #[arg(long, default_value_t = 3)]
    pub poly_order: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    /// Inertial trace (CSV).
    #[arg(long)]
    pub motion_trace: PathBuf,
    /// Visual series (JSON-Lines).
    #[arg(long)]
    pub visual: PathBuf,
    /// Avatar to align against; required when the file holds several.
    #[arg(long)]
    pub avatar: Option<String>,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = kinelink::align::DEFAULT_DELTA_MAX)]
    pub delta_max: f64,
    /// Defaults to half the window length.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub origin: f64,
    #[arg(long, default_value_t = kinelink::signal::trace::DEFAULT_SAMPLE_INTERVAL)]
    pub sample_interval: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    /// Run config (JSON); flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub visual: Option<PathBuf>,
    #[arg(long)]
    pub motion: Option<PathBuf>,
    /// Directory of `<identity>.csv` traces, aligned before filtering.
    #[arg(long)]
    pub motion_traces: Option<PathBuf>,
    /// Motion classifier, needed with --motion-traces.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long)]
    pub t_norm: Option<f64>,
    #[arg(long)]
    pub restricted: bool,
    #[arg(long, value_enum)]
    pub index_mode: Option<IndexMode>,
    #[arg(long)]
    pub min_observed_fraction: Option<f64>,
    /// Ground truth; adds outcomes to the rankings.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Evaluation report path (JSON); requires --truth.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub rankings: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub top_k: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a one-row CSV summary.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated `PxQ` sizes, e.g. `1000x1000,10000x10000`.
    #[arg(long, value_parser = parse_sizes)]
    pub sizes: Sizes,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 3)]
    pub t_abs: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["naive", "indexed"])]
    pub methods: Vec<MethodArg>,
    /// Naive rows with more than this many pairs are skipped.
    #[arg(long, default_value_t = 10_000_000_000)]
    pub naive_cutoff: u128,
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Naive,
    Indexed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sizes(pub Vec<(usize, usize)>);

pub fn parse_sizes(s: &str) -> std::result::Result<Sizes, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (p, q) = part
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("`{part}` is not of the form PxQ"))?;
        let parse = |v: &str| -> std::result::Result<usize, String> {
            let v = v.trim();
            v.parse()
                .or_else(|_| v.parse::<f64>().ok().filter(|f| f.fract() == 0.0 && *f >= 0.0).map(|f| f as usize).ok_or(()))
                .map_err(|_| format!("`{v}` is not a size"))
        };
        out.push((parse(p)?, parse(q)?));
    }
    if out.is_empty() {
        return Err("no sizes given".into());
    }
    Ok(Sizes(out))
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Window lengths, multiples of the spec's window.
    #[arg(long, value_delimiter = ',', required = true)]
    pub w_values: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub t_values: Vec<f64>,
    #[arg(long)]
    pub restricted: bool,
    #[arg(long, default_value_t = kinelink::correlate::DEFAULT_MIN_OBSERVED_FRACTION)]
    pub min_observed_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub session: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the grid in long `(w, t_norm, outcome, fraction)` form.
    #[arg(long)]
    pub long: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitClassifierArgs {
    #[arg(long, value_enum)]
    pub channel: ChannelArg,
    #[arg(long, default_value_t = 1.0)]
    pub w: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Runs a parsed command line, returning what to print on success.
pub fn run(cli: Cli) -> Result<String> {
    if cli.version {
        return Ok(version_text());
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::config("threads", "must be at least 1"));
        }
        // A pool that already exists (repeated calls in one process) is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let Some(command) = cli.command else {
        return Err(Error::config("command", "no subcommand given; see --help"));
    };
    match command {
        Command::Generate(a) => commands::generate(&a),
        Command::BuildSeries(a) => commands::build_series(&a),
        Command::Align(a) => commands::align(&a),
        Command::Correlate(a) => commands::correlate(&a),
        Command::Evaluate(a) => commands::evaluate(&a),
        Command::Bench(a) => commands::bench(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::FitClassifier(a) => commands::fit_classifier(&a),
    }
}

fn io_at(path: &Path, e: io::Error) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| io_at(path, e))
}

pub(crate) fn read_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| io_at(path, e))
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_at(path, e))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = create(path)?;
    f.write_all(contents.as_bytes()).map_err(|e| io_at(path, e))?;
    f.flush().map_err(|e| io_at(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_parse() {
        assert_eq!(parse_sizes("100x100").unwrap(), Sizes(vec![(100, 100)]));
        assert_eq!(parse_sizes("1e3x2000, 10X5").unwrap(), Sizes(vec![(1000, 2000), (10, 5)]));
        assert!(parse_sizes("100").is_err());
        assert!(parse_sizes("axb").is_err());
        assert!(parse_sizes("").is_err());
    }

    #[test]
    fn exit_codes_are_distinct() {
        let errs = [
            Error::Io(io::Error::other("x")),
            Error::config("f", "m"),
            Error::LengthMismatch { expected: 1, found: 2 },
            Error::MemoryCap { required: 2, cap: 1 },
        ];
        let codes: Vec<u8> = errs.iter().map(exit_code).collect();
        assert_eq!(codes, [EXIT_IO, EXIT_CONFIG, EXIT_DATA, EXIT_RESOURCE]);
        assert!(!codes.contains(&EXIT_USAGE));
    }

    #[test]
    fn version_lists_formats() {
        let v = version_text();
        assert!(v.contains("rankings: rankings-jsonl/1"));
        assert_eq!(v.lines().count(), 1 + FORMAT_VERSIONS.len());
    }
}
