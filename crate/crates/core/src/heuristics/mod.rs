//! Construction heuristics: noising, greedy growth, and codeword removal.

mod greedy;
mod noising;
mod prune;

pub use greedy::{greedy_construct, greedy_construct_with, GreedyOptions};
pub use noising::{noising_search, noising_search_observed, NoisingParams, SearchReport, Step};
pub use prune::{is_one_minimal, prune, DEFAULT_RESTARTS};

use rand::Rng;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::signature::verify_identifying;

/// Picks uniformly among `items`, which must be nonempty.
fn pick<T: Copy>(rng: &mut impl Rng, items: &[T]) -> T {
    items[rng.gen_range(0..items.len())]
}

/// Fresh from-scratch check on anything a heuristic is about to hand out.
fn certify(code: Code, r: u32) -> Result<Code> {
    let v = verify_identifying(&code, r)?;
    match v.witness {
        None => Ok(code),
        Some(witness) => Err(Error::NotIdentifying { r, witness }),
    }
}

fn check_params(r: u32, n: u32) -> Result<()> {
    crate::space::check_dim(n)?;
    if r >= n {
        return Err(Error::Parameters(format!(
            "identifying codes need r < n, got r={r}, n={n}"
        )));
    }
    Ok(())
}
