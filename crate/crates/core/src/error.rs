use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid activity label code {0} (expected 0..=7)")]
    InvalidLabelCode(i64),
    #[error("unknown sensor position `{0}`")]
    UnknownPosition(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("trace spans {duration:.3} s, shorter than one {w} s window")]
    TraceTooShort { duration: f64, w: f64 },
    #[error("smoothing filter misconfigured: {0}")]
    FilterConfig(String),
    #[error("empty window")]
    EmptyWindow,
    #[error("classifier expects {expected} features, got {found}")]
    ModelMismatch { expected: usize, found: usize },
    #[error("invalid classifier model: {0}")]
    InvalidModel(String),
    #[error("invalid confusion matrix: {0}")]
    InvalidConfusionMatrix(String),
    #[error("at least two paired observations are required")]
    InsufficientData,
    #[error("rank correlation undefined for a constant sequence")]
    UndefinedCorrelation,
    #[error("no candidate could be ranked")]
    EmptyRanking,
    #[error("mismatch budget {t_abs} exceeds sequence length {k}")]
    BudgetExceedsLength { t_abs: usize, k: usize },
    #[error("estimated index size {required} bytes exceeds the cap of {cap} bytes")]
    MemoryCap { required: u64, cap: u64 },
    #[error("corrupt index snapshot: {0}")]
    Snapshot(String),
    #[error("offset {offset} s leaves no overlap with the observation grid")]
    NoOverlap { offset: f64 },
    #[error("no ground truth for avatar `{0}`")]
    MissingGroundTruth(String),
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Coarse error category; the CLI maps these onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Io,
    Config,
    Data,
    Resource,
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io(_) => ErrorKind::Io,
            Error::Config { .. } | Error::FilterConfig(_) | Error::BudgetExceedsLength { .. } => {
                ErrorKind::Config
            }
            Error::MemoryCap { .. } => ErrorKind::Resource,
            _ => ErrorKind::Data,
        }
    }
}
