//! Cross-channel identity linkage: match anonymous avatars observed on video
//! to motion-sensor identities by their activity sequences and movement
//! magnitudes.
//!
//! The pipeline turns raw traces into [`ActivityVectorSeries`], prunes the
//! avatar × identity cross product with an exact Hamming filter (naive or
//! [`index`]ed), and ranks surviving identities by Spearman correlation of
//! magnitudes. [`synth`] generates cohorts with known ground truth and
//! [`eval`] scores rankings against it.

pub mod align;
pub mod correlate;
pub mod error;
pub mod eval;
pub mod index;
pub mod model;
pub mod seed;
pub mod signal;
pub mod synth;

pub use correlate::{
    activity_filter, correlate, rank_candidates, CandidatePairSet, FilterConfig, LabelSet, Outcome,
    RankedIdentityList,
};
pub use error::{Error, ErrorKind, Result};
pub use index::{filter_with_index, WildcardIndex};
pub use model::{
    ActivityLabel, ActivityVectorSeries, Channel, Dataset, Magnitude, MagnitudeSeq, SensorPosition,
};
