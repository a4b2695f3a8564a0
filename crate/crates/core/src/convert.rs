//! Moving between r-identifying codes in F^n and r-discriminating codes in
//! F^(n+1), for odd r.
//!
//! Codewords of a discriminating code are even vectors (the attribute side);
//! the vertices that must be covered and told apart are the odd vectors (the
//! individuals). Appending a parity bit maps an identifying code to a
//! discriminating one, and deleting any single coordinate goes back.

use serde::Serialize;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::signature::{analyze, Verification};
use crate::space::check_dim;

/// The two sides of F^n as a bipartite graph: even vectors are attributes,
/// odd vectors are individuals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipartiteSides {
    dim: u32,
}

impl BipartiteSides {
    pub fn new(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_attribute(word: u32) -> bool {
        word.count_ones().is_multiple_of(2)
    }

    pub fn is_individual(word: u32) -> bool {
        !Self::is_attribute(word)
    }

    pub fn attributes(&self) -> impl Iterator<Item = u32> {
        (0..1u32 << self.dim).filter(|&w| Self::is_attribute(w))
    }

    pub fn individuals(&self) -> impl Iterator<Item = u32> {
        (0..1u32 << self.dim).filter(|&w| Self::is_individual(w))
    }

    /// Size of each side, `2^(n-1)`.
    pub fn side_len(&self) -> u64 {
        1u64 << (self.dim - 1)
    }
}

/// Result of checking the discriminating property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminationReport {
    pub dim: u32,
    pub radius: u32,
    /// Counts restricted to odd vertices.
    #[serde(flatten)]
    pub verification: Verification,
}

impl DiscriminationReport {
    pub fn holds(&self) -> bool {
        self.verification.holds()
    }
}

fn require_even(code: &Code) -> Result<()> {
    match code.words().iter().find(|w| w.count_ones() % 2 == 1) {
        Some(&w) => Err(Error::OddCodeword(w)),
        None => Ok(()),
    }
}

/// Checks that every odd vertex is r-covered and that odd vertices have
/// pairwise distinct signatures. `r` must be odd and the code all-even.
pub fn is_discriminating(code: &Code, r: u32) -> Result<DiscriminationReport> {
    if r.is_multiple_of(2) {
        return Err(Error::EvenRadius(r));
    }
    require_even(code)?;
    let verification = analyze(code, r, BipartiteSides::is_individual)?;
    Ok(DiscriminationReport {
        dim: code.dim(),
        radius: r,
        verification,
    })
}

/// `{ c | π(c) : c ∈ C }`.
pub fn to_discriminating(code: &Code) -> Result<Code> {
    code.with_parity()
}

/// Deletes coordinate `pos` (1-based; `None` means the last one) from an
/// all-even code. The map is injective on even vectors, so sizes match.
pub fn to_identifying(code: &Code, pos: Option<u32>) -> Result<Code> {
    require_even(code)?;
    let pos = pos.unwrap_or(code.dim());
    let out = code.delete_coordinate(pos)?;
    debug_assert_eq!(out.len(), code.len());
    Ok(out)
}
