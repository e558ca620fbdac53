use rand::prelude::*;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::ActivityLabel;
use crate::seed;

/// `count` sequences, each a random permutation of the windows of a randomly
/// chosen seed sequence. Output `i` depends only on `(seed, i)`.
pub fn permute_expand(seeds: &[Vec<ActivityLabel>], count: usize, seed: u64) -> Result<Vec<Vec<ActivityLabel>>> {
    if seeds.is_empty() {
        return Err(Error::config("seeds", "need at least one seed sequence"));
    }
    Ok((0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::rng(seed, "permute-expand", i as u64);
            let mut out = seeds[rng.gen_range(0..seeds.len())].clone();
            out.shuffle(&mut rng);
            out
        })
        .collect())
}
