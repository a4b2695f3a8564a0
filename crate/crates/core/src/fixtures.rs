//! Reference codes shipped with the crate.

use crate::code::Code;
use crate::codefile;

const R1_N9_114: &str = include_str!("../data/fixtures/r1_n9_114.code");

/// A 1-identifying code of length 9 and size 114.
pub fn r1_n9_114() -> Code {
    codefile::parse(R1_N9_114).expect("fixture parses").code
}
