//! Vectors of the binary Hamming space F^n.
//!
//! A vector is stored as the low `dim` bits of a machine word. Coordinate 1
//! (the leftmost symbol of the row vector) is the most significant of those
//! bits and coordinate `dim` is bit 0, so a listing of codewords as decimal
//! integers reads back unchanged.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Hard cap on the dimension. Anything that enumerates F^n is O(2^n).
pub const MAX_DIM: u32 = 30;

#[inline]
pub(crate) fn mask(dim: u32) -> u32 {
    if dim >= 32 {
        u32::MAX
    } else {
        (1u32 << dim) - 1
    }
}

pub(crate) fn check_dim(dim: u32) -> Result<()> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::BadDimension(dim))
    }
}

pub(crate) fn check_radius(r: u32, dim: u32) -> Result<()> {
    if r <= dim {
        Ok(())
    } else {
        Err(Error::RadiusOutOfRange { r, dim })
    }
}

/// Hamming distance between two raw words.
#[inline]
pub fn distance_words(a: u32, b: u32) -> u32 {
    (a ^ b).count_ones()
}

/// `C(n, k)`, exact for everything this crate needs (n ≤ 64).
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as u64
}

/// Number of vectors in a ball of radius `r` in F^n.
pub fn ball_volume(n: u32, r: u32) -> u64 {
    (0..=r.min(n)).map(|i| binomial(n, i)).sum()
}

/// All words of F^dim at distance exactly `radius` from `center`.
///
/// Generated with Gosper's hack over the weight-`radius` masks, so the cost is
/// proportional to the sphere, not to 2^dim.
#[derive(Clone, Debug)]
pub struct Sphere {
    center: u32,
    next: u64,
    limit: u64,
    done: bool,
}

impl Sphere {
    pub fn new(center: u32, dim: u32, radius: u32) -> Self {
        let done = radius > dim;
        Self {
            center,
            next: if done { 0 } else { (1u64 << radius) - 1 },
            limit: 1u64 << dim,
            done,
        }
    }
}

impl Iterator for Sphere {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.done {
            return None;
        }
        let cur = self.next;
        if cur == 0 {
            self.done = true;
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            let nxt = (((ripple ^ cur) >> 2) / low) | ripple;
            if nxt >= self.limit {
                self.done = true;
            } else {
                self.next = nxt;
            }
        }
        Some(self.center ^ cur as u32)
    }
}

/// All words within distance `radius` of `center`, layer by layer.
#[derive(Clone, Debug)]
pub struct Ball {
    center: u32,
    dim: u32,
    radius: u32,
    layer: u32,
    sphere: Sphere,
}

impl Ball {
    pub fn new(center: u32, dim: u32, radius: u32) -> Self {
        let radius = radius.min(dim);
        Self {
            center,
            dim,
            radius,
            layer: 0,
            sphere: Sphere::new(center, dim, 0),
        }
    }
}

impl Iterator for Ball {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        loop {
            if let Some(w) = self.sphere.next() {
                return Some(w);
            }
            if self.layer >= self.radius {
                return None;
            }
            self.layer += 1;
            self.sphere = Sphere::new(self.center, self.dim, self.layer);
        }
    }
}

/// Words whose distance to `center` lies in `lo..=hi`.
pub fn annulus(center: u32, dim: u32, lo: u32, hi: u32) -> impl Iterator<Item = u32> {
    (lo..=hi.min(dim)).flat_map(move |k| Sphere::new(center, dim, k))
}

/// A vertex of F^n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BitVector {
    word: u32,
    dim: u32,
}

impl BitVector {
    pub fn new(word: u32, dim: u32) -> Result<Self> {
        check_dim(dim)?;
        if word & !mask(dim) != 0 {
            return Err(Error::WordOutOfRange {
                word: u64::from(word),
                dim,
            });
        }
        Ok(Self { word, dim })
    }

    /// Parses a string of `0`/`1` symbols, coordinate 1 first.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let dim = bits.len() as u32;
        check_dim(dim)?;
        let mut word = 0u32;
        for ch in bits.chars() {
            word = (word << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::Parameters(format!("not a binary string: {bits:?}"))),
                };
        }
        Ok(Self { word, dim })
    }

    pub fn zero(dim: u32) -> Result<Self> {
        Self::new(0, dim)
    }

    pub fn ones(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            word: mask(dim),
            dim,
        })
    }

    #[inline]
    pub fn word(self) -> u32 {
        self.word
    }

    #[inline]
    pub fn dim(self) -> u32 {
        self.dim
    }

    pub fn weight(self) -> u32 {
        self.word.count_ones()
    }

    /// Parity-check bit: 0 for even weight, 1 for odd.
    pub fn parity(self) -> u8 {
        (self.word.count_ones() & 1) as u8
    }

    pub fn is_even(self) -> bool {
        self.parity() == 0
    }

    /// Value of coordinate `pos` (1-based, coordinate 1 is the leftmost).
    pub fn coordinate(self, pos: u32) -> Result<u8> {
        if pos == 0 || pos > self.dim {
            return Err(Error::CoordinateOutOfRange { pos, dim: self.dim });
        }
        Ok(((self.word >> (self.dim - pos)) & 1) as u8)
    }

    pub fn distance(self, other: BitVector) -> Result<u32> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(distance_words(self.word, other.word))
    }

    /// Coordinatewise sum modulo two.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: BitVector) -> Result<BitVector> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(Self {
            word: self.word ^ other.word,
            dim: self.dim,
        })
    }

    /// `self | other`: `self` takes the leading coordinates.
    pub fn concat(self, other: BitVector) -> Result<BitVector> {
        let dim = self.dim + other.dim;
        if dim > MAX_DIM {
            return Err(Error::BadDimension(dim));
        }
        Ok(Self {
            word: (self.word << other.dim) | other.word,
            dim,
        })
    }

    /// `self | π(self)`, always an even vector.
    pub fn with_parity(self) -> Result<BitVector> {
        self.concat(Self {
            word: u32::from(self.parity()),
            dim: 1,
        })
    }

    /// Removes coordinate `pos` (1-based); the others keep their order.
    pub fn delete_coordinate(self, pos: u32) -> Result<BitVector> {
        if pos == 0 || pos > self.dim {
            return Err(Error::CoordinateOutOfRange { pos, dim: self.dim });
        }
        if self.dim < 2 {
            return Err(Error::BadDimension(self.dim - 1));
        }
        Ok(Self {
            word: delete_bit(self.word, self.dim - pos),
            dim: self.dim - 1,
        })
    }

    /// The ball of radius `r` around `self`, sphere by sphere.
    pub fn ball(self, r: u32) -> Result<impl Iterator<Item = BitVector>> {
        check_radius(r, self.dim)?;
        let dim = self.dim;
        Ok(Ball::new(self.word, dim, r).map(move |word| BitVector { word, dim }))
    }

    pub fn sphere(self, r: u32) -> Result<impl Iterator<Item = BitVector>> {
        check_radius(r, self.dim)?;
        let dim = self.dim;
        Ok(Sphere::new(self.word, dim, r).map(move |word| BitVector { word, dim }))
    }
}

/// Removes bit `bit` (0 = least significant) and closes the gap.
#[inline]
pub(crate) fn delete_bit(word: u32, bit: u32) -> u32 {
    let low = word & ((1u32 << bit) - 1);
    let high = (word >> (bit + 1)) << bit;
    high | low
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in (0..self.dim).rev() {
            f.write_str(if (self.word >> pos) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}
