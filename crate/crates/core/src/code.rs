use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{check_dim, delete_bit, mask, BitVector, MAX_DIM};

/// A nonempty-in-practice, duplicate-free set of vectors of F^n, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Code {
    dim: u32,
    words: Vec<u32>,
}

impl Code {
    /// Builds a code from raw words. Order does not matter; duplicates are an error.
    pub fn new(dim: u32, words: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_dim(dim)?;
        let limit = mask(dim);
        let mut words: Vec<u32> = words.into_iter().collect();
        if let Some(&bad) = words.iter().find(|&&w| w & !limit != 0) {
            return Err(Error::WordOutOfRange {
                word: u64::from(bad),
                dim,
            });
        }
        words.sort_unstable();
        if let Some(pair) = words.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::DuplicateCodeword(pair[0]));
        }
        Ok(Self { dim, words })
    }

    /// Like [`Code::new`] but silently merges duplicates.
    pub fn from_words_dedup(dim: u32, words: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_dim(dim)?;
        let limit = mask(dim);
        let mut words: Vec<u32> = words.into_iter().collect();
        if let Some(&bad) = words.iter().find(|&&w| w & !limit != 0) {
            return Err(Error::WordOutOfRange {
                word: u64::from(bad),
                dim,
            });
        }
        words.sort_unstable();
        words.dedup();
        Ok(Self { dim, words })
    }

    pub fn from_vectors(dim: u32, vectors: &[BitVector]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, v.dim()));
        }
        Self::new(dim, vectors.iter().map(|v| v.word()))
    }

    /// Parses whitespace-separated binary strings such as `"000 011 101"`.
    pub fn from_bit_strings(text: &str) -> Result<Self> {
        let vectors = text
            .split_whitespace()
            .map(BitVector::from_bits)
            .collect::<Result<Vec<_>>>()?;
        let dim = vectors.first().ok_or(Error::EmptyCode)?.dim();
        Self::from_vectors(dim, &vectors)
    }

    /// All of F^dim.
    pub fn full(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            words: (0..=mask(dim)).collect(),
        })
    }

    /// F^dim without the zero vector, which is Δ-separating for every Δ < dim.
    pub fn full_minus_zero(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            words: (1..=mask(dim)).collect(),
        })
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Codewords as raw words in increasing order.
    #[inline]
    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = BitVector> + '_ {
        let dim = self.dim;
        self.words
            .iter()
            .map(move |&w| BitVector::new(w, dim).expect("codeword fits its dimension"))
    }

    pub fn contains(&self, word: u32) -> bool {
        self.words.binary_search(&word).is_ok()
    }

    pub fn position(&self, word: u32) -> Option<usize> {
        self.words.binary_search(&word).ok()
    }

    pub fn is_all_even(&self) -> bool {
        self.words.iter().all(|w| w.count_ones() % 2 == 0)
    }

    /// `self ∪ {word}`; a no-op if already present.
    pub fn with(&self, word: u32) -> Result<Code> {
        Code::from_words_dedup(self.dim, self.words.iter().copied().chain(Some(word)))
    }

    /// `self \ {word}`.
    pub fn without(&self, word: u32) -> Code {
        Code {
            dim: self.dim,
            words: self.words.iter().copied().filter(|&w| w != word).collect(),
        }
    }

    pub fn union(&self, other: &Code) -> Result<Code> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Code::from_words_dedup(self.dim, self.words.iter().chain(&other.words).copied())
    }

    /// `X ⊕ Y = { x|y : x ∈ X, y ∈ Y }`.
    pub fn direct_sum(&self, other: &Code) -> Result<Code> {
        let dim = self.dim + other.dim;
        if dim > MAX_DIM {
            return Err(Error::BadDimension(dim));
        }
        let shift = other.dim;
        // x-major order over sorted inputs is already sorted
        let words = self
            .words
            .iter()
            .flat_map(|&x| other.words.iter().map(move |&y| (x << shift) | y))
            .collect();
        Ok(Code { dim, words })
    }

    /// Appends the parity-check bit to every codeword.
    pub fn with_parity(&self) -> Result<Code> {
        if self.dim + 1 > MAX_DIM {
            return Err(Error::BadDimension(self.dim + 1));
        }
        let words = self
            .words
            .iter()
            .map(|&w| (w << 1) | (w.count_ones() & 1))
            .collect();
        Ok(Code {
            dim: self.dim + 1,
            words,
        })
    }

    /// Deletes coordinate `pos` (1-based) from every codeword. Codewords that
    /// collide are merged, so the result may be smaller.
    pub fn delete_coordinate(&self, pos: u32) -> Result<Code> {
        if pos == 0 || pos > self.dim {
            return Err(Error::CoordinateOutOfRange { pos, dim: self.dim });
        }
        if self.dim < 2 {
            return Err(Error::BadDimension(0));
        }
        let bit = self.dim - pos;
        Code::from_words_dedup(self.dim - 1, self.words.iter().map(|&w| delete_bit(w, bit)))
    }

    /// Adds `translate` to every codeword.
    pub fn translate(&self, translate: u32) -> Result<Code> {
        if translate & !mask(self.dim) != 0 {
            return Err(Error::WordOutOfRange {
                word: u64::from(translate),
                dim: self.dim,
            });
        }
        Code::new(self.dim, self.words.iter().map(|&w| w ^ translate))
    }

    /// Permutes coordinates, then adds `translate`.
    pub fn apply_isometry(&self, translate: BitVector, perm: &Permutation) -> Result<Code> {
        if translate.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, translate.dim()));
        }
        if perm.dim() != self.dim {
            return Err(Error::InvalidPermutation);
        }
        Code::new(
            self.dim,
            self.words
                .iter()
                .map(|&w| perm.apply(w) ^ translate.word()),
        )
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code(n={}, {:?})", self.dim, self.words)
    }
}

/// A permutation of the coordinates of F^n.
///
/// Entry `i` is the (0-based) position that coordinate `i + 1` is sent to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    pub fn new(image: Vec<u32>) -> Result<Self> {
        let n = image.len() as u32;
        check_dim(n).map_err(|_| Error::InvalidPermutation)?;
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= n || std::mem::replace(&mut seen[i as usize], true) {
                return Err(Error::InvalidPermutation);
            }
        }
        Ok(Self { image })
    }

    pub fn identity(dim: u32) -> Result<Self> {
        Self::new((0..dim).collect())
    }

    pub fn dim(&self) -> u32 {
        self.image.len() as u32
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { image: inv }
    }

    /// Applies the permutation to a raw word of this dimension.
    pub fn apply(&self, word: u32) -> u32 {
        let n = self.dim();
        let mut out = 0;
        for (i, &j) in self.image.iter().enumerate() {
            let bit = (word >> (n - 1 - i as u32)) & 1;
            out |= bit << (n - 1 - j);
        }
        out
    }

    /// All `n!` permutations of `n` coordinates, in lexicographic order.
    pub fn all(n: u32) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<u32> = (0..n).collect();
        loop {
            out.push(Permutation { image: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}
