//! Identifying and discriminating codes in the binary Hamming space.
//!
//! A code `C ⊆ F^n` is r-identifying when every vertex has a nonempty
//! signature `B_r(x) ∩ C` and no two vertices share one. The crate covers
//! the vector space itself ([`space`], [`code`]), fast evaluation of
//! `f = NC + NS` ([`signature`]), conversion to discriminating codes
//! ([`convert`]), exhaustive minima ([`exact`]), heuristics
//! ([`heuristics`]), length extension ([`extend`]) and a bounds registry
//! ([`bounds`]).

pub mod bounds;
pub mod code;
pub mod codefile;
pub mod convert;
pub mod error;
pub mod exact;
pub mod extend;
pub mod fixtures;
pub mod heuristics;
pub mod signature;
pub mod space;

pub use bounds::{BoundRecord, Classification, ConsistencyReport, Registry};
pub use code::{Code, Permutation};
pub use codefile::CodeFile;
pub use convert::{is_discriminating, to_discriminating, to_identifying, BipartiteSides, DiscriminationReport};
pub use error::{Error, Result, Witness};
pub use exact::{is_separating, min_discriminating, min_identifying, min_separating, ExactOptions, ExactOutcome, StartSize};
pub use extend::{compute_x_set, cover_annulus, extend_c1, extend_c2, Construction, Extension, ExtensionPlan, ExtensionReport};
pub use heuristics::{greedy_construct, noising_search, prune, NoisingParams, SearchReport};
pub use signature::{evaluate, is_identifying, verify_identifying, DeltaScratch, Evaluation, SignatureTable, Verification};
pub use space::{BitVector, MAX_DIM};
