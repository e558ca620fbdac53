use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::ActivityLabel;

/// A subset of the eight activity labels.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LabelSet(u8);

impl LabelSet {
    pub const fn empty() -> Self {
        LabelSet(0)
    }

    pub const fn all() -> Self {
        LabelSet(0xFF)
    }

    /// Every label except `Idle` and `HeadRotation`.
    pub const fn reduced() -> Self {
        LabelSet(0b1111_1010)
    }

    pub fn contains(self, label: ActivityLabel) -> bool {
        self.0 & (1 << label.code()) != 0
    }

    pub fn insert(&mut self, label: ActivityLabel) {
        self.0 |= 1 << label.code();
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn labels(self) -> impl Iterator<Item = ActivityLabel> {
        ActivityLabel::ALL.into_iter().filter(move |l| self.contains(*l))
    }
}

impl FromIterator<ActivityLabel> for LabelSet {
    fn from_iter<I: IntoIterator<Item = ActivityLabel>>(iter: I) -> Self {
        let mut s = LabelSet::empty();
        for l in iter {
            s.insert(l);
        }
        s
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels()).finish()
    }
}

impl Serialize for LabelSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.labels())
    }
}

impl<'de> Deserialize<'de> for LabelSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Vec::<ActivityLabel>::deserialize(d)?.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hamming {
    pub distance: usize,
    /// Windows that took part in the comparison.
    pub effective_len: usize,
}

/// Positional mismatch count. With a restricted set, windows where either
/// label is outside the set are skipped entirely.
pub fn hamming_distance(
    a: &[ActivityLabel],
    b: &[ActivityLabel],
    restricted: Option<LabelSet>,
) -> Result<Hamming> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(match restricted {
        None => Hamming {
            distance: a.iter().zip(b).filter(|(x, y)| x != y).count(),
            effective_len: a.len(),
        },
        Some(set) => {
            let mut h = Hamming {
                distance: 0,
                effective_len: 0,
            };
            for (x, y) in a.iter().zip(b) {
                if set.contains(*x) && set.contains(*y) {
                    h.effective_len += 1;
                    h.distance += usize::from(x != y);
                }
            }
            h
        }
    })
}

/// Allowed mismatches: `floor(t_norm · n_effective)`.
pub fn mismatch_budget(t_norm: f64, n_effective: usize) -> usize {
    let raw = t_norm * n_effective as f64;
    // Absorb representation error such as 0.29 · 100 = 28.999999999999996.
    ((raw + 1e-9).floor() as usize).min(n_effective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use ActivityLabel::*;

    #[test]
    fn single_mismatch_in_ten_windows() {
        let motion = [Idle, Walking, Walking, HandMovement, BodyRotation, Jumping, Bending, Other, Walking, Idle];
        let mut visual = motion;
        visual[8] = Idle;
        let h = hamming_distance(&motion, &visual, None).unwrap();
        assert_eq!(h.distance, 1);
        assert_eq!(h.distance as f64 / h.effective_len as f64, 0.1);
    }

    #[test]
    fn identical_and_mismatched_lengths() {
        let a = [Idle, Walking, Other];
        assert_eq!(hamming_distance(&a, &a, None).unwrap().distance, 0);
        assert!(matches!(
            hamming_distance(&a, &a[..2], None),
            Err(Error::LengthMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn restricted_skip_rule() {
        let a = [Idle, HeadRotation, Walking];
        let b = [Idle, Other, Walking];
        let set: LabelSet = [Walking, Idle, HandMovement, BodyRotation, Bending, Jumping, Other]
            .into_iter()
            .collect();
        assert_eq!(
            hamming_distance(&a, &b, Some(set)).unwrap(),
            Hamming { distance: 0, effective_len: 2 }
        );
    }

    #[test]
    fn budgets() {
        assert_eq!(mismatch_budget(0.30, 10), 3);
        assert_eq!(mismatch_budget(1.0, 7), 7);
        assert_eq!(mismatch_budget(0.30, 5), 1);
        assert_eq!(mismatch_budget(0.0, 9), 0);
        assert_eq!(mismatch_budget(0.29, 100), 29);
        assert_eq!(mismatch_budget(0.5, 0), 0);
    }

    #[test]
    fn label_set_serde() {
        let s: LabelSet = [Walking, Idle].into_iter().collect();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0,4]");
        assert_eq!(serde_json::from_str::<LabelSet>("[4,0]").unwrap(), s);
    }

    fn labels() -> impl Strategy<Value = Vec<ActivityLabel>> {
        proptest::collection::vec((0i64..8).prop_map(|c| ActivityLabel::from_code(c).unwrap()), 0..40)
    }

    proptest! {
        #[test]
        fn restricted_never_exceeds_unrestricted(a in labels(), seed in any::<u64>(), mask in any::<u8>()) {
            let b: Vec<_> = a.iter().enumerate()
                .map(|(i, l)| if (seed >> (i % 64)) & 1 == 1 { ActivityLabel::ALL[(l.index() + 1) % 8] } else { *l })
                .collect();
            let full = hamming_distance(&a, &b, None).unwrap();
            let r = hamming_distance(&a, &b, Some(LabelSet(mask))).unwrap();
            prop_assert!(r.distance <= full.distance);
            prop_assert!(r.effective_len <= full.effective_len);
        }

        #[test]
        fn budget_is_monotone(t1 in 0.0f64..=1.0, t2 in 0.0f64..=1.0, n in 0usize..500) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(mismatch_budget(lo, n) <= mismatch_budget(hi, n));
            prop_assert_eq!(mismatch_budget(1.0, n), n);
            prop_assert_eq!(mismatch_budget(0.0, n), 0);
        }
    }
}
