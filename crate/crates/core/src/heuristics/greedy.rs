use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{certify, check_params, pick};
use crate::code::Code;
use crate::error::Result;
use crate::signature::{DeltaScratch, SignatureTable};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GreedyOptions {
    /// Price only this many random non-codewords per step instead of all of
    /// them. A step whose sample brings no improvement falls back to a full scan.
    pub candidate_sample: Option<usize>,
}

/// Grows a code from the empty set, each time adding a vertex with the
/// largest drop in `f`, ties broken at random, until the code identifies.
pub fn greedy_construct(r: u32, n: u32, seed: u64) -> Result<Code> {
    greedy_construct_with(r, n, seed, GreedyOptions::default())
}

pub fn greedy_construct_with(r: u32, n: u32, seed: u64, opts: GreedyOptions) -> Result<Code> {
    check_params(r, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = SignatureTable::empty(n, r)?;
    let mut scratch = DeltaScratch::new();
    let size = 1u32 << n;
    let mut ties = Vec::new();

    while !table.evaluation().is_zero() {
        let mut best = i64::MAX;
        ties.clear();
        match opts.candidate_sample {
            Some(k) if (k as u32) < size => {
                let picks = sample(&mut rng, size as usize, k);
                let words = picks.into_iter().map(|i| i as u32);
                scan(&table, &mut scratch, words, &mut best, &mut ties)?;
                if best >= 0 {
                    best = i64::MAX;
                    ties.clear();
                    scan(&table, &mut scratch, 0..size, &mut best, &mut ties)?;
                }
            }
            _ => scan(&table, &mut scratch, 0..size, &mut best, &mut ties)?,
        }
        // with r < n some single addition always helps
        debug_assert!(best < 0);
        let s = pick(&mut rng, &ties);
        table.insert(s)?;
    }
    certify(table.code(), r)
}

/// Prices adding each non-codeword of `words`, keeping the minimizers.
fn scan(
    table: &SignatureTable,
    scratch: &mut DeltaScratch,
    words: impl Iterator<Item = u32>,
    best: &mut i64,
    ties: &mut Vec<u32>,
) -> Result<()> {
    for s in words {
        if table.is_codeword(s) {
            continue;
        }
        let d = table.insert_delta_with(scratch, s)?;
        if d < *best {
            *best = d;
            ties.clear();
        }
        if d == *best {
            ties.push(s);
        }
    }
    Ok(())
}
