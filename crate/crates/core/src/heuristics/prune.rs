use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::certify;
use crate::code::Code;
use crate::error::{Error, Result};
use crate::signature::{evaluate, verify_identifying, DeltaScratch, SignatureTable};

pub const DEFAULT_RESTARTS: u32 = 16;

/// Drops codewords that are not needed for identification until none can go.
///
/// Each restart visits the codewords in a fresh random order and removes any
/// whose removal keeps `f = 0`. The smallest result over all restarts wins.
pub fn prune(code: &Code, r: u32, restarts: u32, seed: u64) -> Result<Code> {
    let v = verify_identifying(code, r)?;
    if let Some(witness) = v.witness {
        return Err(Error::NotIdentifying { r, witness });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scratch = DeltaScratch::new();
    let mut best: Option<Code> = None;
    for _ in 0..restarts.max(1) {
        let mut table = SignatureTable::build(code, r)?;
        let mut order: Vec<u32> = table.codewords().map(|(slot, _)| slot).collect();
        order.shuffle(&mut rng);
        loop {
            let mut changed = false;
            for &slot in &order {
                if table.word_at(slot).is_none() {
                    continue;
                }
                if table.remove_delta_with(&mut scratch, slot)? == 0 {
                    table.remove(slot)?;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let out = table.code();
        if best.as_ref().is_none_or(|b| out.len() < b.len()) {
            best = Some(out);
        }
    }
    certify(best.expect("at least one restart"), r)
}

/// True when removing any single codeword breaks identification.
pub fn is_one_minimal(code: &Code, r: u32) -> Result<bool> {
    for &w in code.words() {
        if evaluate(&code.without(w), r)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
