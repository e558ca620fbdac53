use kinelink::seed;
use kinelink::signal::{build_series, Trace};
use kinelink::synth::{
    coarsen_dataset, generate_cohort, generate_session, permute_expand, session_motion_trace, train_motion_classifier,
    CohortSpec, MotionPath,
};
use kinelink::ActivityLabel;

#[test]
fn session_trace_reproduces_trace_path_series() {
    let mut spec = CohortSpec::new(4, 6, 31);
    spec.motion_path = MotionPath::Trace;
    let cohort = generate_session(&spec, 1).unwrap();
    let model = train_motion_classifier(
        spec.w,
        &spec.magnitude_base,
        spec.intensity_range,
        seed::derive(spec.seed, "classifier", 0),
    )
    .unwrap();
    for (i, series) in cohort.motion.series().iter().enumerate() {
        let trace = session_motion_trace(&spec, i, 1).unwrap();
        let rebuilt = build_series(Trace::Motion(&trace), spec.w, &model, series.source_id()).unwrap();
        assert_eq!(&rebuilt, series);
    }
}

#[test]
fn cohorts_are_deterministic_and_seed_sensitive() {
    let spec = CohortSpec::new(12, 10, 5);
    assert_eq!(generate_cohort(&spec).unwrap(), generate_cohort(&spec).unwrap());
    let other = CohortSpec::new(12, 10, 6);
    assert_ne!(generate_cohort(&spec).unwrap().visual, generate_cohort(&other).unwrap().visual);
}

#[test]
fn truth_is_a_bijection() {
    let spec = CohortSpec::new(25, 8, 2);
    let cohort = generate_cohort(&spec).unwrap();
    let mut ids: Vec<&str> = cohort
        .visual
        .series()
        .iter()
        .map(|v| cohort.truth.identity_of(v.source_id()).unwrap())
        .collect();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), 25);
    for id in ids {
        assert!(cohort.motion.series().iter().any(|m| m.source_id() == id));
    }
}

#[test]
fn noiseless_channels_share_the_script() {
    let spec = CohortSpec::new(8, 12, 77);
    let cohort = generate_cohort(&spec).unwrap();
    for v in cohort.visual.series() {
        let id = cohort.truth.identity_of(v.source_id()).unwrap();
        let m = cohort.motion.series().iter().find(|m| m.source_id() == id).unwrap();
        assert_eq!(v.activities(), m.activities());
    }
}

#[test]
fn coarsening_divides_length() {
    let spec = CohortSpec::new(3, 12, 1);
    let cohort = generate_cohort(&spec).unwrap();
    let c = coarsen_dataset(&cohort.motion, 3).unwrap();
    assert_eq!(c.uniform_len(), Some(4));
    assert_eq!(c.window_seconds(), Some(spec.w * 3.0));
}

#[test]
fn expansion_keeps_label_multisets() {
    use ActivityLabel::*;
    let seeds = vec![vec![Idle, Walking, Walking, Jumping], vec![Bending, Bending, Other, HandMovement]];
    let out = permute_expand(&seeds, 50, 9).unwrap();
    for s in &out {
        let mut sorted = s.clone();
        sorted.sort();
        assert!(seeds.iter().any(|seed| {
            let mut t = seed.clone();
            t.sort();
            t == sorted
        }));
    }
    assert_eq!(out, permute_expand(&seeds, 50, 9).unwrap());
}
