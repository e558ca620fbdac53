//! Ground-truth cohorts: scripted activities, a confusion-channel label
//! model, per-identity magnitude intensity, kinematic trace synthesis and
//! permutation expansion for large benchmarks.

pub mod cohort;
pub mod expand;
pub mod keypoints;
pub mod motion;
pub mod spec;

pub use cohort::{
    avatar_id, avatar_permutation, coarsen, coarsen_dataset, generate_cohort, generate_script,
    generate_session, identity_id, session_motion_trace, identity_motion_trace, identity_profile,
    synthesize_motion_series, synthesize_visual_series, Cohort, GroundTruth, IdentityProfile,
};
pub use expand::permute_expand;
pub use keypoints::{synthesize_keypoint_trace, train_visual_classifier};
pub use motion::{synthesize_motion_trace, train_motion_classifier};
pub use spec::{field_like_motion_cm, field_like_visual_cm, CohortSpec, MotionPath};
