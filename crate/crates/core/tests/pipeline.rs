use kinelink::correlate::{check_uniform, FilterConfig};
use kinelink::index::{filter_with_index, query_dataset, WildcardIndex};
use kinelink::synth::{generate_cohort, CohortSpec};
use kinelink::{activity_filter, correlate, rank_candidates, Dataset};

fn brute_pairs(visual: &Dataset, motion: &Dataset, t: usize) -> Vec<Vec<(usize, usize)>> {
    visual
        .series()
        .iter()
        .map(|v| {
            motion
                .series()
                .iter()
                .enumerate()
                .filter_map(|(j, m)| {
                    let d = v.activities().iter().zip(m.activities()).filter(|(a, b)| a != b).count();
                    (d <= t).then_some((j, d))
                })
                .collect()
        })
        .collect()
}

fn flat(set: &kinelink::CandidatePairSet) -> Vec<Vec<(usize, usize)>> {
    set.per_avatar
        .iter()
        .map(|c| c.iter().map(|c| (c.identity, c.distance)).collect())
        .collect()
}

#[test]
fn naive_and_indexed_filters_agree_with_brute_force() {
    let mut spec = CohortSpec::new(40, 10, 3);
    spec.visual_cm = kinelink::synth::field_like_visual_cm();
    spec.motion_cm = kinelink::synth::field_like_motion_cm();
    let cohort = generate_cohort(&spec).unwrap();
    assert_eq!(check_uniform(&cohort.visual, &cohort.motion).unwrap(), Some(10));
    for t in 0..=10 {
        let oracle = brute_pairs(&cohort.visual, &cohort.motion, t);
        let cfg = FilterConfig {
            budget_override: Some(t),
            ..FilterConfig::default()
        };
        let naive = activity_filter(&cohort.visual, &cohort.motion, &cfg).unwrap();
        let indexed = filter_with_index(&cohort.visual, &cohort.motion, t).unwrap();
        assert_eq!(flat(&naive), oracle, "naive t={t}");
        assert_eq!(flat(&indexed), oracle, "indexed t={t}");
    }
}

#[test]
fn snapshot_index_answers_like_a_fresh_build() {
    let cohort = generate_cohort(&CohortSpec::new(30, 9, 8)).unwrap();
    let seqs: Vec<_> = cohort.motion.series().iter().map(|s| s.activities()).collect();
    let index = WildcardIndex::build(&seqs, 3).unwrap();
    let mut bytes = Vec::new();
    index.write_snapshot(&mut bytes).unwrap();
    let loaded = WildcardIndex::read_snapshot(bytes.as_slice(), u64::MAX).unwrap();
    let a = query_dataset(&index, &cohort.visual, &cohort.motion).unwrap();
    let b = query_dataset(&loaded, &cohort.visual, &cohort.motion).unwrap();
    assert_eq!(flat(&a), flat(&b));
}

#[test]
fn ranking_after_either_filter_is_identical() {
    let cohort = generate_cohort(&CohortSpec::new(50, 10, 21)).unwrap();
    let cfg = FilterConfig::with_t_norm(0.3);
    let naive = correlate(&cohort.visual, &cohort.motion, &cfg, 0.5).unwrap();
    let pairs = filter_with_index(&cohort.visual, &cohort.motion, cfg.budget(10)).unwrap();
    let indexed = rank_candidates(&cohort.visual, &cohort.motion, &pairs, 0.5).unwrap();
    assert_eq!(naive, indexed);
}
