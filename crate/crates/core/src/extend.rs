//! Extending an identifying code in length (and optionally radius):
//! from an r1-identifying code of length n, build an (r1 + r2)-identifying
//! code of length n + p. `r2 = 0` keeps the radius.
//!
//! Both constructions start from `C ⊕ F^p` and patch the vertices of `X`
//! (those with no codeword in the band `[r1 - p + r2 + 1, r1 + r2]`) with a
//! covering set `Y`:
//!
//! * C1: `(C ⊕ F^p) ∪ (Y ⊕ (F^p \ {0^p}))`, `Y` within the band of each `x ∈ X`;
//! * C2: `(C ⊕ F^p) ∪ (Y ⊕ S)`, `S` k-separating in F^p and `Y` at distance
//!   exactly `r1 + r2 - k` from each `x ∈ X`.

use serde::Serialize;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::exact::is_separating;
use crate::signature::verify_identifying;
use crate::space::{annulus, check_dim, BitVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    C1,
    C2 { k: u32, separ: Code },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub x_size: usize,
    pub y_size: usize,
    /// `|F^p \ {0^p}|` for C1, `|S|` for C2.
    pub separ_size: usize,
    pub size: usize,
    pub radius: u32,
    pub dim: u32,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub code: Code,
    pub report: ExtensionReport,
}

#[derive(Clone, Debug)]
pub struct ExtensionPlan {
    base: Code,
    r1: u32,
    p: u32,
    r2: u32,
    construction: Construction,
    x_set: Vec<u32>,
    y_set: Vec<u32>,
}

/// The band `[lo, hi]` of distances a codeword must hit to spare a vertex
/// from `X`, clamped to `[0, n]`. `None` when the band is empty.
fn band(r1: u32, p: u32, r2: u32, n: u32) -> Option<(u32, u32)> {
    let lo = (r1 + r2 + 1).saturating_sub(p);
    let hi = (r1 + r2).min(n);
    (lo <= hi).then_some((lo, hi))
}

fn x_words(code: &Code, r1: u32, p: u32, r2: u32) -> Vec<u32> {
    let n = code.dim();
    let Some((lo, hi)) = band(r1, p, r2, n) else {
        return (0..1u32 << n).collect();
    };
    let mut spared = vec![false; 1 << n];
    for &c in code.words() {
        for v in annulus(c, n, lo, hi) {
            spared[v as usize] = true;
        }
    }
    (0..1u32 << n).filter(|&v| !spared[v as usize]).collect()
}

/// Vertices `x` with every codeword at distance `≤ r1 - p + r2` or `> r1 + r2`.
pub fn compute_x_set(code: &Code, r1: u32, p: u32, r2: u32) -> Result<Vec<BitVector>> {
    let n = code.dim();
    x_words(code, r1, p, r2)
        .into_iter()
        .map(|w| BitVector::new(w, n))
        .collect()
}

fn cover_words(x: &[u32], lo: u32, hi: u32, n: u32) -> Result<Vec<u32>> {
    check_dim(n)?;
    if lo > hi || hi > n {
        return Err(Error::Parameters(format!(
            "need 0 <= lo <= hi <= n, got lo={lo}, hi={hi}, n={n}"
        )));
    }
    let size = 1usize << n;
    let mut counts = vec![0u32; size];
    for &v in x {
        for y in annulus(v, n, lo, hi) {
            counts[y as usize] += 1;
        }
    }
    let mut covered = vec![false; x.len()];
    let mut left = x.len();
    let mut out = Vec::new();
    while left > 0 {
        // max_by_key keeps the last maximum, so scan in reverse for the smallest word
        let (best, &count) = counts
            .iter()
            .enumerate()
            .rev()
            .max_by_key(|&(_, c)| c)
            .expect("nonempty space");
        debug_assert!(count > 0, "every vertex is at distance lo from something");
        let y = best as u32;
        out.push(y);
        for (i, &v) in x.iter().enumerate() {
            if !covered[i] && (lo..=hi).contains(&(v ^ y).count_ones()) {
                covered[i] = true;
                left -= 1;
                for z in annulus(v, n, lo, hi) {
                    counts[z as usize] -= 1;
                }
            }
        }
    }
    Ok(out)
}

/// Greedy set cover of `x` by vertices at distance in `[lo, hi]`: take the
/// vertex covering the most uncovered members, smallest word on ties.
pub fn cover_annulus(x: &[BitVector], lo: u32, hi: u32, n: u32) -> Result<Vec<BitVector>> {
    let words: Vec<u32> = x
        .iter()
        .map(|v| {
            if v.dim() == n {
                Ok(v.word())
            } else {
                Err(Error::DimensionMismatch(v.dim(), n))
            }
        })
        .collect::<Result<_>>()?;
    cover_words(&words, lo, hi, n)?
        .into_iter()
        .map(|w| BitVector::new(w, n))
        .collect()
}

impl ExtensionPlan {
    /// Checks parameters, verifies the base code and computes `X` and `Y`.
    ///
    /// Without `force`, the ranges under which the constructions are proved
    /// are enforced: `p ≥ 1` and `k ≤ p - 1`, plus `r1 ≥ p ≥ r2` when the
    /// radius grows (`r2 ≥ 1`).
    pub fn new(base: &Code, r1: u32, p: u32, r2: u32, construction: Construction, force: bool) -> Result<Self> {
        let n = base.dim();
        if p == 0 {
            return Err(Error::Parameters("p must be at least 1".into()));
        }
        check_dim(n + p)?;
        if r1 == 0 && !force {
            return Err(Error::Parameters("r1 must be at least 1".into()));
        }
        if r2 >= 1 && !(r1 >= p && p >= r2) && !force {
            return Err(Error::Parameters(format!(
                "growing the radius needs r1 >= p >= r2 >= 1, got r1={r1}, p={p}, r2={r2}"
            )));
        }
        if let Construction::C2 { k, separ } = &construction {
            if *k >= p && !force {
                return Err(Error::Parameters(format!("need k <= p - 1, got k={k}, p={p}")));
            }
            if separ.dim() != p {
                return Err(Error::DimensionMismatch(separ.dim(), p));
            }
            if !is_separating(separ, *k)? {
                let witness = verify_identifying(separ, *k)?
                    .witness
                    .expect("a non-separating code has a witness");
                return Err(Error::NotSeparating { k: *k, witness });
            }
        }
        let v = verify_identifying(base, r1)?;
        if let Some(witness) = v.witness {
            return Err(Error::NotIdentifying { r: r1, witness });
        }

        let x_set = x_words(base, r1, p, r2);
        let y_set = if x_set.is_empty() {
            Vec::new()
        } else {
            let (lo, hi) = match &construction {
                Construction::C1 => band(r1, p, r2, n).unwrap_or((0, n)),
                Construction::C2 { k, .. } => {
                    let d = (r1 + r2).checked_sub(*k).filter(|&d| d <= n).ok_or_else(|| {
                        Error::Parameters(format!("distance r1 + r2 - k must lie in [0, {n}]"))
                    })?;
                    (d, d)
                }
            };
            cover_words(&x_set, lo, hi, n)?
        };
        Ok(Self {
            base: base.clone(),
            r1,
            p,
            r2,
            construction,
            x_set,
            y_set,
        })
    }

    pub fn x_set(&self) -> &[u32] {
        &self.x_set
    }

    pub fn y_set(&self) -> &[u32] {
        &self.y_set
    }

    pub fn radius(&self) -> u32 {
        self.r1 + self.r2
    }

    pub fn dim(&self) -> u32 {
        self.base.dim() + self.p
    }

    fn tail(&self) -> Result<Code> {
        match &self.construction {
            Construction::C1 => Code::full_minus_zero(self.p),
            Construction::C2 { separ, .. } => Ok(separ.clone()),
        }
    }

    /// The extended code, not yet verified.
    pub fn construct(&self) -> Result<Code> {
        let n = self.base.dim();
        let head = self.base.direct_sum(&Code::full(self.p)?)?;
        if self.y_set.is_empty() {
            return Ok(head);
        }
        let y = Code::new(n, self.y_set.iter().copied())?;
        head.union(&y.direct_sum(&self.tail()?)?)
    }

    pub fn report(&self, code: &Code, verified: bool) -> Result<ExtensionReport> {
        Ok(ExtensionReport {
            x_size: self.x_set.len(),
            y_size: self.y_set.len(),
            separ_size: self.tail()?.len(),
            size: code.len(),
            radius: self.radius(),
            dim: self.dim(),
            verified,
        })
    }

    /// Constructs and verifies; a failed check is an error with a witness.
    pub fn build(&self) -> Result<Extension> {
        let code = self.construct()?;
        let v = verify_identifying(&code, self.radius())?;
        if let Some(witness) = v.witness {
            return Err(Error::NotIdentifying {
                r: self.radius(),
                witness,
            });
        }
        let report = self.report(&code, true)?;
        Ok(Extension { code, report })
    }
}

/// `(C ⊕ F^p) ∪ (Y ⊕ (F^p \ {0^p}))`, verified (r1 + r2)-identifying.
pub fn extend_c1(code: &Code, r1: u32, p: u32, r2: u32) -> Result<Code> {
    Ok(ExtensionPlan::new(code, r1, p, r2, Construction::C1, false)?.build()?.code)
}

/// `(C ⊕ F^p) ∪ (Y ⊕ separ)`, verified (r1 + r2)-identifying.
pub fn extend_c2(code: &Code, r1: u32, p: u32, r2: u32, k: u32, separ: &Code) -> Result<Code> {
    let construction = Construction::C2 {
        k,
        separ: separ.clone(),
    };
    Ok(ExtensionPlan::new(code, r1, p, r2, construction, false)?.build()?.code)
}
