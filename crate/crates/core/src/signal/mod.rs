//! Raw channel inputs to activity-vector series: windowing, smoothing,
//! magnitude extraction and activity classification.

pub mod build;
pub mod classifier;
pub mod confusion;
pub mod features;
pub mod magnitude;
pub mod savgol;
pub mod trace;
pub mod window;

pub use build::{build_motion_on_grid, build_series, build_series_with, Trace};
pub use classifier::{classify_window, Classifier, ClassifierModel};
pub use confusion::{apply_confusion, ConfusionMatrix};
pub use features::{extract_features, ChannelWindow};
pub use magnitude::{motion_magnitude, visual_magnitude, GRAVITY};
pub use savgol::{savgol_smooth, SavGolConfig};
pub use trace::{KeypointFrame, KeypointTrace, MotionSample, MotionTrace, Timestamped};
pub use window::{segment_windows, Window};
