//! Exact Hamming-threshold filtering through a hash multimap of
//! wildcard-masked activity sequences.
//!
//! Every motion sequence is inserted under all of its masks with at most
//! `t_abs` wildcards; a visual sequence is looked up under all of its own
//! masks. Two sequences share a key exactly when some position subset of
//! size ≤ `t_abs` covers every mismatch, i.e. when their Hamming distance is
//! at most `t_abs`. The key family depends only on `(k, t_abs)`, so build is
//! `O(q)` and each query `O(1)` in the dataset sizes.
//!
//! Each mask has its own table, and batch queries visit one table at a time
//! for a block of avatars so that the table being probed stays in cache.
//!
//! Keys are packed four bits per position (`0..=7` label code, `0xF`
//! wildcard) into a `u64`, which bounds `k` at [`MAX_K`]. The canonical byte
//! form used for snapshots is one byte per position with `0xFF` as wildcard.

use std::io::{Read, Write};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::correlate::{check_uniform, Candidate, CandidatePairSet};
use crate::error::{Error, Result};
use crate::model::{ActivityLabel, Dataset};

pub const MAX_K: usize = 16;
/// Wildcard symbol in canonical key bytes.
pub const WILDCARD: u8 = 0xFF;
const PACKED_WILDCARD: u64 = 0xF;
const NO_ENTRY: u32 = u32::MAX;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"KLWX";
pub const SNAPSHOT_VERSION: u16 = 1;
pub const SNAPSHOT_FORMAT_VERSION: &str = "wildcard-index/1";

/// Default ceiling on the estimated index footprint.
pub const DEFAULT_MEMORY_CAP: u64 = 4 << 30;
/// Environment variable overriding [`DEFAULT_MEMORY_CAP`] (bytes).
pub const MEMORY_CAP_ENV: &str = "KINELINK_MEMORY_CAP";

pub fn memory_cap_from_env() -> u64 {
    std::env::var(MEMORY_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MEMORY_CAP)
}

/// An activity sequence with some positions replaced by the wildcard.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WildcardKey(Vec<u8>);

impl WildcardKey {
    fn from_packed(packed: u64, k: usize) -> Self {
        WildcardKey(
            (0..k)
                .map(|i| match (packed >> (4 * i)) & 0xF {
                    PACKED_WILDCARD => WILDCARD,
                    c => c as u8,
                })
                .collect(),
        )
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if let Some(b) = bytes.iter().find(|b| **b > 7 && **b != WILDCARD) {
            return Err(Error::Snapshot(format!("invalid key symbol {b:#04x}")));
        }
        Ok(WildcardKey(bytes.to_vec()))
    }

    fn packed(&self) -> u64 {
        self.0.iter().enumerate().fold(0, |acc, (i, b)| {
            let nibble = if *b == WILDCARD { PACKED_WILDCARD } else { u64::from(*b) };
            acc | nibble << (4 * i)
        })
    }

    /// Canonical encoding: one byte per position, `0xFF` for the wildcard.
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn wildcard_count(&self) -> usize {
        self.0.iter().filter(|b| **b == WILDCARD).count()
    }
}

fn pack(seq: &[ActivityLabel]) -> u64 {
    seq.iter()
        .enumerate()
        .fold(0, |acc, (i, l)| acc | u64::from(l.code()) << (4 * i))
}

/// `Σ_{i=0..=t} C(k, i)`.
pub fn keys_per_sequence(k: usize, t_abs: usize) -> u64 {
    let mut total = 0u64;
    let mut c = 1u64;
    for i in 0..=t_abs.min(k) {
        total += c;
        c = c * (k - i) as u64 / (i + 1) as u64;
    }
    total
}

/// Nibble masks of every position subset of size ≤ `t_abs`.
fn subset_masks(k: usize, t_abs: usize) -> Vec<u64> {
    fn rec(start: usize, k: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
        out.push(acc);
        if left == 0 {
            return;
        }
        for i in start..k {
            rec(i + 1, k, left - 1, acc | PACKED_WILDCARD << (4 * i), out);
        }
    }
    let mut out = Vec::with_capacity(keys_per_sequence(k, t_abs) as usize);
    rec(0, k, t_abs, 0, &mut out);
    out
}

fn check_shape(k: usize, t_abs: usize) -> Result<()> {
    if t_abs > k {
        return Err(Error::BudgetExceedsLength { t_abs, k });
    }
    if k > MAX_K {
        return Err(Error::config(
            "k",
            format!("indexed filtering supports sequences up to {MAX_K} windows, got {k}"),
        ));
    }
    Ok(())
}

/// Every mask of `seq` with at most `t_abs` wildcards.
pub fn wildcard_expansions(seq: &[ActivityLabel], t_abs: usize) -> Result<Vec<WildcardKey>> {
    check_shape(seq.len(), t_abs)?;
    let base = pack(seq);
    Ok(subset_masks(seq.len(), t_abs)
        .into_iter()
        .map(|m| WildcardKey::from_packed(base | m, seq.len()))
        .collect())
}

/// Estimated heap footprint of an index over `q` sequences.
pub fn estimate_bytes(q: usize, k: usize, t_abs: usize) -> u64 {
    let masks = keys_per_sequence(k, t_abs);
    // Worst case every key in a table distinct: hash slots of (u64, u32) plus
    // a control byte at 7/8 load, rounded up to a power of two; 4 bytes of
    // chain per entry.
    let buckets = ((q as u64).saturating_mul(8) / 7 + 1).next_power_of_two();
    masks.saturating_mul(buckets * 17 + q as u64 * 4)
}

/// Avatars per block in batch queries.
const QUERY_BLOCK: usize = 256;

/// Immutable after build; safe for any number of concurrent readers.
#[derive(Debug, Clone)]
pub struct WildcardIndex {
    k: usize,
    t_abs: usize,
    q: usize,
    masks: Vec<u64>,
    /// Per mask: packed key → first identity carrying it.
    tables: Vec<FxHashMap<u64, u32>>,
    /// `next[m·q + id]` is the identity after `id` in its chain under mask `m`.
    next: Vec<u32>,
}

impl WildcardIndex {
    pub fn build(sequences: &[&[ActivityLabel]], t_abs: usize) -> Result<Self> {
        Self::build_capped(sequences, t_abs, u64::MAX)
    }

    /// Refuses with [`Error::MemoryCap`] when the estimate exceeds `cap`.
    pub fn build_capped(sequences: &[&[ActivityLabel]], t_abs: usize, cap: u64) -> Result<Self> {
        let k = sequences.first().map_or(0, |s| s.len());
        check_shape(k, t_abs)?;
        if let Some(bad) = sequences.iter().find(|s| s.len() != k) {
            return Err(Error::LengthMismatch {
                expected: k,
                found: bad.len(),
            });
        }
        let required = estimate_bytes(sequences.len(), k, t_abs);
        if required > cap {
            return Err(Error::MemoryCap { required, cap });
        }
        let masks = subset_masks(k, t_abs);
        let q = sequences.len();
        if q.saturating_mul(masks.len()) >= NO_ENTRY as usize {
            return Err(Error::MemoryCap {
                required,
                cap: u64::from(NO_ENTRY),
            });
        }
        let packed: Vec<u64> = sequences.iter().map(|s| pack(s)).collect();
        let built: Vec<(FxHashMap<u64, u32>, Vec<u32>)> = masks
            .par_iter()
            .map(|&mask| {
                let mut table = FxHashMap::with_capacity_and_hasher(q, Default::default());
                let mut next = vec![NO_ENTRY; q];
                // Descending insertion leaves every chain in ascending order.
                for id in (0..q).rev() {
                    if let Some(prev) = table.insert(packed[id] | mask, id as u32) {
                        next[id] = prev;
                    }
                }
                (table, next)
            })
            .collect();
        let mut tables = Vec::with_capacity(masks.len());
        let mut next = Vec::with_capacity(q * masks.len());
        for (t, n) in built {
            tables.push(t);
            next.extend(n);
        }
        Ok(WildcardIndex {
            k,
            t_abs,
            q,
            masks,
            tables,
            next,
        })
    }

    pub fn build_from_dataset(motion: &Dataset, t_abs: usize, cap: u64) -> Result<Self> {
        let seqs: Vec<&[ActivityLabel]> = motion.series().iter().map(|s| s.activities()).collect();
        Self::build_capped(&seqs, t_abs, cap)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t_abs(&self) -> usize {
        self.t_abs
    }

    pub fn identity_count(&self) -> usize {
        self.q
    }

    /// Total stored key → identity entries.
    pub fn entry_count(&self) -> usize {
        self.next.len()
    }

    pub fn distinct_keys(&self) -> usize {
        self.tables.iter().map(|t| t.len()).sum()
    }

    pub fn new_scratch(&self) -> QueryScratch {
        QueryScratch {
            stamp: vec![0; self.q],
            generation: 0,
        }
    }

    /// Identities within Hamming distance `t_abs` of `seq`, ascending.
    pub fn query(&self, seq: &[ActivityLabel]) -> Result<Vec<usize>> {
        let mut scratch = self.new_scratch();
        let mut out = Vec::new();
        self.query_into(seq, &mut scratch, &mut out)?;
        Ok(out)
    }

    pub fn query_into(
        &self,
        seq: &[ActivityLabel],
        scratch: &mut QueryScratch,
        out: &mut Vec<usize>,
    ) -> Result<()> {
        if seq.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                found: seq.len(),
            });
        }
        out.clear();
        scratch.generation = scratch.generation.wrapping_add(1);
        if scratch.generation == 0 {
            scratch.stamp.fill(0);
            scratch.generation = 1;
        }
        let base = pack(seq);
        for (m, (mask, table)) in self.masks.iter().zip(&self.tables).enumerate() {
            let Some(&head) = table.get(&(base | mask)) else {
                continue;
            };
            let next = &self.next[m * self.q..(m + 1) * self.q];
            let mut id = head;
            while id != NO_ENTRY {
                let seen = &mut scratch.stamp[id as usize];
                if *seen != scratch.generation {
                    *seen = scratch.generation;
                    out.push(id as usize);
                }
                id = next[id as usize];
            }
        }
        out.sort_unstable();
        Ok(())
    }

    /// [`query`](Self::query) for many sequences at once, in input order.
    pub fn query_many(&self, seqs: &[&[ActivityLabel]]) -> Result<Vec<Vec<usize>>> {
        if let Some(bad) = seqs.iter().find(|s| s.len() != self.k) {
            return Err(Error::LengthMismatch {
                expected: self.k,
                found: bad.len(),
            });
        }
        let packed: Vec<u64> = seqs.iter().map(|s| pack(s)).collect();
        let blocks: Vec<Vec<Vec<usize>>> = packed.par_chunks(QUERY_BLOCK).map(|b| self.query_block(b)).collect();
        Ok(blocks.into_iter().flatten().collect())
    }

    fn query_block(&self, block: &[u64]) -> Vec<Vec<usize>> {
        let mut hits: Vec<Vec<u32>> = vec![Vec::new(); block.len()];
        for (m, (mask, table)) in self.masks.iter().zip(&self.tables).enumerate() {
            let next = &self.next[m * self.q..(m + 1) * self.q];
            for (h, base) in hits.iter_mut().zip(block) {
                if let Some(&head) = table.get(&(base | mask)) {
                    let mut id = head;
                    while id != NO_ENTRY {
                        h.push(id);
                        id = next[id as usize];
                    }
                }
            }
        }
        hits.into_iter()
            .map(|mut h| {
                h.sort_unstable();
                h.dedup();
                h.into_iter().map(|id| id as usize).collect()
            })
            .collect()
    }

    /// Writes the header followed by all (key, identity) pairs sorted by
    /// canonical key bytes, then identity.
    pub fn write_snapshot<W: Write>(&self, mut w: W) -> Result<()> {
        let mut pairs: Vec<(WildcardKey, u32)> = Vec::with_capacity(self.entry_count());
        for (m, table) in self.tables.iter().enumerate() {
            let next = &self.next[m * self.q..(m + 1) * self.q];
            for (key, &head) in table {
                let wk = WildcardKey::from_packed(*key, self.k);
                let mut id = head;
                while id != NO_ENTRY {
                    pairs.push((wk.clone(), id));
                    id = next[id as usize];
                }
            }
        }
        pairs.sort_unstable();
        w.write_all(SNAPSHOT_MAGIC)?;
        w.write_all(&SNAPSHOT_VERSION.to_le_bytes())?;
        w.write_all(&(self.k as u16).to_le_bytes())?;
        w.write_all(&(self.t_abs as u32).to_le_bytes())?;
        w.write_all(&(self.q as u64).to_le_bytes())?;
        w.write_all(&(pairs.len() as u64).to_le_bytes())?;
        for (key, id) in &pairs {
            w.write_all(key.as_bytes())?;
            w.write_all(&id.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses and fully validates a snapshot: every identity must carry
    /// exactly the expansion family of one base sequence.
    pub fn read_snapshot<R: Read>(mut r: R, cap: u64) -> Result<Self> {
        let mut header = [0u8; 28];
        r.read_exact(&mut header)
            .map_err(|_| Error::Snapshot("truncated header".into()))?;
        if &header[0..4] != SNAPSHOT_MAGIC {
            return Err(Error::Snapshot("bad magic".into()));
        }
        let version = u16::from_le_bytes([header[4], header[5]]);
        if version != SNAPSHOT_VERSION {
            return Err(Error::Snapshot(format!("unsupported version {version}")));
        }
        let k = u16::from_le_bytes([header[6], header[7]]) as usize;
        let t_abs = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
        let q = u64::from_le_bytes(header[12..20].try_into().unwrap());
        let entry_count = u64::from_le_bytes(header[20..28].try_into().unwrap());
        check_shape(k, t_abs).map_err(|e| Error::Snapshot(e.to_string()))?;
        let per_seq = keys_per_sequence(k, t_abs);
        if q.checked_mul(per_seq) != Some(entry_count) {
            return Err(Error::Snapshot(format!(
                "entry count {entry_count} does not match {q} identities × {per_seq} keys"
            )));
        }
        let q = usize::try_from(q).map_err(|_| Error::Snapshot("identity count too large".into()))?;
        let required = estimate_bytes(q, k, t_abs);
        if required > cap {
            return Err(Error::MemoryCap { required, cap });
        }
        let mut bases: Vec<Option<Vec<ActivityLabel>>> = vec![None; q];
        let mut pairs = Vec::with_capacity(entry_count as usize);
        let mut buf = vec![0u8; k + 4];
        let mut prev: Option<(WildcardKey, u32)> = None;
        for _ in 0..entry_count {
            r.read_exact(&mut buf)
                .map_err(|_| Error::Snapshot("truncated entry table".into()))?;
            let key = WildcardKey::from_bytes(&buf[..k])?;
            let id = u32::from_le_bytes(buf[k..].try_into().unwrap());
            if id as usize >= q {
                return Err(Error::Snapshot(format!("identity {id} out of range")));
            }
            if key.wildcard_count() > t_abs {
                return Err(Error::Snapshot("key exceeds the wildcard budget".into()));
            }
            let pair = (key, id);
            if prev.as_ref().is_some_and(|p| *p >= pair) {
                return Err(Error::Snapshot("entries not strictly sorted".into()));
            }
            if pair.0.wildcard_count() == 0 {
                let slot = &mut bases[id as usize];
                if slot.is_some() {
                    return Err(Error::Snapshot(format!("identity {id} has two base keys")));
                }
                *slot = Some(
                    pair.0
                        .as_bytes()
                        .iter()
                        .map(|b| ActivityLabel::from_code(i64::from(*b)).expect("validated symbol"))
                        .collect(),
                );
            }
            pairs.push(pair.clone());
            prev = Some(pair);
        }
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(Error::Snapshot("trailing bytes after entry table".into()));
        }
        let bases = bases
            .into_iter()
            .enumerate()
            .map(|(id, b)| b.ok_or_else(|| Error::Snapshot(format!("identity {id} has no base key"))))
            .collect::<Result<Vec<_>>>()?;
        let seqs: Vec<&[ActivityLabel]> = bases.iter().map(Vec::as_slice).collect();
        let index = if seqs.is_empty() {
            let masks = subset_masks(k, t_abs);
            WildcardIndex {
                k,
                t_abs,
                q: 0,
                tables: vec![FxHashMap::default(); masks.len()],
                masks,
                next: Vec::new(),
            }
        } else {
            Self::build_capped(&seqs, t_abs, cap)?
        };
        // Every stored pair must be an expansion of its identity's base.
        for (key, id) in &pairs {
            let base = pack(&bases[*id as usize]);
            let packed = key.packed();
            let wild = packed_wildcard_mask(packed, k);
            if base | wild != packed {
                return Err(Error::Snapshot(format!("key for identity {id} is not one of its expansions")));
            }
        }
        Ok(index)
    }
}

fn packed_wildcard_mask(packed: u64, k: usize) -> u64 {
    (0..k)
        .filter(|i| (packed >> (4 * i)) & 0xF == PACKED_WILDCARD)
        .fold(0, |acc, i| acc | PACKED_WILDCARD << (4 * i))
}

/// Per-thread scratch for de-duplicating query hits.
#[derive(Debug, Clone)]
pub struct QueryScratch {
    stamp: Vec<u32>,
    generation: u32,
}

/// Indexed equivalent of the naive activity filter with an absolute budget.
pub fn filter_with_index(visual: &Dataset, motion: &Dataset, t_abs: usize) -> Result<CandidatePairSet> {
    filter_with_index_capped(visual, motion, t_abs, u64::MAX)
}

pub fn filter_with_index_capped(
    visual: &Dataset,
    motion: &Dataset,
    t_abs: usize,
    cap: u64,
) -> Result<CandidatePairSet> {
    let Some(k) = check_uniform(visual, motion)? else {
        return Ok(CandidatePairSet::default());
    };
    if motion.is_empty() {
        check_shape(k, t_abs)?;
        return Ok(CandidatePairSet {
            per_avatar: vec![Vec::new(); visual.len()],
        });
    }
    let index = WildcardIndex::build_from_dataset(motion, t_abs, cap)?;
    query_dataset(&index, visual, motion)
}

/// Queries every avatar against a prebuilt index over `motion`.
pub fn query_dataset(index: &WildcardIndex, visual: &Dataset, motion: &Dataset) -> Result<CandidatePairSet> {
    let seqs: Vec<&[ActivityLabel]> = visual.series().iter().map(|s| s.activities()).collect();
    let hits = index.query_many(&seqs)?;
    let per_avatar = seqs
        .par_iter()
        .zip(hits)
        .map(|(v, ids)| {
            ids.into_iter()
                .map(|j| Candidate {
                    identity: j,
                    distance: v
                        .iter()
                        .zip(motion.series()[j].activities())
                        .filter(|(a, b)| a != b)
                        .count(),
                })
                .collect()
        })
        .collect();
    Ok(CandidatePairSet { per_avatar })
}
