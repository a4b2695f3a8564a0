use std::fmt;

use serde::Serialize;

use crate::space::MAX_DIM;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A vertex (or pair of vertices) showing why a code fails a property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// No codeword lies within the radius of this vertex.
    Uncovered { vertex: u32 },
    /// The two vertices are covered by exactly the same codewords.
    Unseparated { first: u32, second: u32 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Uncovered { vertex } => write!(f, "vertex {vertex} is not covered"),
            Witness::Unseparated { first, second } => {
                write!(f, "vertices {first} and {second} are not separated")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension {0} outside 1..={MAX_DIM}")]
    BadDimension(u32),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("word {word} does not fit in {dim} coordinates")]
    WordOutOfRange { word: u64, dim: u32 },
    #[error("coordinate {pos} outside 1..={dim}")]
    CoordinateOutOfRange { pos: u32, dim: u32 },
    #[error("radius {r} outside 0..={dim}")]
    RadiusOutOfRange { r: u32, dim: u32 },
    #[error("duplicate codeword {0}")]
    DuplicateCodeword(u32),
    #[error("malformed coordinate permutation")]
    InvalidPermutation,
    #[error("slot {0} does not hold a codeword")]
    InvalidSlot(u32),
    #[error("{0} is already a codeword")]
    AlreadyCodeword(u32),
    #[error("the code is empty")]
    EmptyCode,
    #[error("radius {0} is even; discriminating codes need an odd radius")]
    EvenRadius(u32),
    #[error("codeword {0} has odd weight")]
    OddCodeword(u32),
    #[error("code is not {r}-identifying: {witness}")]
    NotIdentifying { r: u32, witness: Witness },
    #[error("code is not {k}-separating: {witness}")]
    NotSeparating { k: u32, witness: Witness },
    #[error("{0}")]
    Parameters(String),
    #[error("dimension {dim} exceeds the limit {limit} for this operation")]
    TooLarge { dim: u32, limit: u32 },
    #[error("no bound recorded for r={r}, n={n}")]
    NoBound { r: u32, n: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
