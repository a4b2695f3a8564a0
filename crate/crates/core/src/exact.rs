//! Exhaustive search for minimum identifying, discriminating and separating
//! codes in small spaces.
//!
//! Every problem reduces to a hitting-set question over at most 64
//! candidate words: each vertex must be covered (hit its ball) and each pair
//! of vertices must be separated (hit the symmetric difference of their
//! balls). Candidates are bits of a `u64`. The search fixes the zero word
//! (all three properties are translation invariant), tries sizes in
//! increasing order, and runs a depth-first search that adds candidates in
//! increasing index order.

use serde::Serialize;

use crate::bounds::Registry;
use crate::code::{Code, Permutation};
use crate::error::{Error, Result};
use crate::heuristics::greedy_construct;
use crate::signature::{evaluate, verify_identifying};
use crate::space::{check_dim, distance_words};

/// Largest length the exact search accepts.
pub const EXACT_CAP: u32 = 6;
/// Largest length for `min_separating`.
pub const SEPARATING_CAP: u32 = 5;
/// Above this length, permutation pruning is off unless asked for.
pub const DEFAULT_SYMMETRY_CAP: u32 = 5;

/// Where the size-ascending loop starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartSize {
    /// The registry's lower bound (falls back to `Trivial` off the table).
    Registry,
    /// A counting bound: `2^s - 1 ≥ #vertices` signatures are needed.
    Trivial,
    Fixed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExactOptions {
    /// Node budget across all sizes; `None` means unlimited.
    pub max_nodes: Option<u64>,
    /// Permutation pruning; `None` picks on by length.
    pub symmetry: Option<bool>,
    pub start: StartSize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            max_nodes: None,
            symmetry: None,
            start: StartSize::Registry,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactOutcome {
    pub code: Code,
    /// True when every smaller size from `start_size` up was ruled out.
    pub proven_minimal: bool,
    pub nodes: u64,
    pub start_size: usize,
}

/// `ns = 0` at radius `k`: distinct signatures for all vertices, with at
/// most one vertex allowed an empty one.
pub fn is_separating(code: &Code, k: u32) -> Result<bool> {
    if k > code.dim() {
        return Err(Error::RadiusOutOfRange { r: k, dim: code.dim() });
    }
    Ok(evaluate(code, k)?.ns == 0)
}

/// Hitting-set instance over candidate words.
struct Problem {
    dim: u32,
    candidates: Vec<u32>,
    requirements: Vec<u64>,
    /// Candidate-index images under each non-identity coordinate permutation.
    perms: Vec<Vec<u8>>,
}

impl Problem {
    fn new(dim: u32, candidates: Vec<u32>, vertices: &[u32], radius: u32, cover: bool, symmetry: bool) -> Result<Self> {
        debug_assert!(candidates.len() <= 64 && candidates.first() == Some(&0));
        let ball_mask = |v: u32| -> u64 {
            candidates
                .iter()
                .enumerate()
                .filter(|(_, &c)| distance_words(c, v) <= radius)
                .fold(0u64, |m, (i, _)| m | 1 << i)
        };
        let balls: Vec<u64> = vertices.iter().map(|&v| ball_mask(v)).collect();
        let mut reqs = Vec::new();
        if cover {
            reqs.extend(balls.iter().copied());
        }
        for i in 0..balls.len() {
            for j in i + 1..balls.len() {
                reqs.push(balls[i] ^ balls[j]);
            }
        }
        if reqs.contains(&0) {
            return Err(Error::Parameters(format!(
                "no code of length {dim} works at radius {radius}"
            )));
        }
        Ok(Self {
            dim,
            perms: if symmetry { perm_tables(dim, &candidates) } else { Vec::new() },
            requirements: minimal_sets(reqs),
            candidates,
        })
    }

    fn code(&self, chosen: u64) -> Code {
        let words = (0..self.candidates.len())
            .filter(|&i| chosen >> i & 1 == 1)
            .map(|i| self.candidates[i]);
        Code::new(self.dim, words).expect("candidates are distinct")
    }
}

/// Drops duplicates and any requirement containing another one.
fn minimal_sets(mut reqs: Vec<u64>) -> Vec<u64> {
    reqs.sort_unstable_by_key(|m| (m.count_ones(), *m));
    reqs.dedup();
    let mut kept: Vec<u64> = Vec::new();
    for r in reqs {
        if !kept.iter().any(|&k| k & !r == 0) {
            kept.push(r);
        }
    }
    kept
}

fn perm_tables(dim: u32, candidates: &[u32]) -> Vec<Vec<u8>> {
    let mut index = vec![u8::MAX; 1 << dim];
    for (i, &c) in candidates.iter().enumerate() {
        index[c as usize] = i as u8;
    }
    Permutation::all(dim)
        .into_iter()
        .filter(|p| *p != Permutation::identity(dim).expect("valid dim"))
        .map(|p| {
            candidates
                .iter()
                .map(|&c| {
                    let img = index[p.apply(c) as usize];
                    debug_assert!(img != u8::MAX, "candidate set must be permutation closed");
                    img
                })
                .collect()
        })
        .collect()
}

struct Search<'a> {
    problem: &'a Problem,
    nodes: u64,
    budget: u64,
    /// Open requirements, one frame per depth.
    buf: Vec<u64>,
}

enum Found {
    Code(u64),
    None,
    OutOfBudget,
}

impl Search<'_> {
    /// Is `set` lexicographically smallest (as a sorted index list) among its images?
    fn canonical(&self, set: u64) -> bool {
        for table in &self.problem.perms {
            let mut img = 0u64;
            let mut rest = set;
            while rest != 0 {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                img |= 1 << table[i as usize];
            }
            let diff = img ^ set;
            if diff != 0 && img & diff & diff.wrapping_neg() != 0 {
                return false;
            }
        }
        true
    }

    /// `buf[from..to]` holds the requirements still open at the parent.
    fn run(&mut self, chosen: u64, size: usize, next: usize, target: usize, from: usize, to: usize) -> Found {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Found::OutOfBudget;
        }
        let total = self.problem.candidates.len();
        let avail = if next >= 64 { 0 } else { !0u64 << next } & (u64::MAX >> (64 - total));
        // the next pick must not pass the last option of any open requirement
        let mut limit = total - 1;
        for i in from..to {
            let req = self.buf[i];
            if req & chosen != 0 {
                continue;
            }
            let left = req & avail;
            if left == 0 {
                self.buf.truncate(to);
                return Found::None;
            }
            limit = limit.min(63 - left.leading_zeros() as usize);
            self.buf.push(req);
        }
        let end = self.buf.len();
        if end == to {
            return Found::Code(chosen);
        }
        let mut result = Found::None;
        if size < target {
            for c in next..=limit {
                let with = chosen | 1 << c;
                if !self.canonical(with) {
                    continue;
                }
                match self.run(with, size + 1, c + 1, target, to, end) {
                    Found::None => {}
                    other => {
                        result = other;
                        break;
                    }
                }
            }
        }
        self.buf.truncate(to);
        result
    }
}

/// Size-ascending search from `start`; returns the first code found.
fn solve(problem: &Problem, start: usize, opts: &ExactOptions) -> (Option<Code>, bool, u64) {
    let mut search = Search {
        problem,
        nodes: 0,
        budget: opts.max_nodes.unwrap_or(u64::MAX),
        buf: Vec::new(),
    };
    let start = start.max(1);
    for target in start..=problem.candidates.len() {
        // the zero word is always in
        search.buf.clear();
        search.buf.extend_from_slice(&problem.requirements);
        let n = search.buf.len();
        match search.run(1, 1, 1, target, 0, n) {
            Found::Code(set) => {
                let code = problem.code(set);
                let minimal = code.len() == target;
                return (Some(code), minimal, search.nodes);
            }
            Found::None => {}
            Found::OutOfBudget => return (None, false, search.nodes),
        }
    }
    (None, true, search.nodes)
}

/// Smallest `s` with `2^s - 1 ≥ vertices`: distinct nonempty signatures.
fn counting_bound(vertices: u64) -> usize {
    (64 - vertices.leading_zeros()) as usize
}

fn symmetry_for(n: u32, opts: &ExactOptions) -> bool {
    opts.symmetry.unwrap_or(n <= DEFAULT_SYMMETRY_CAP)
}

fn check_exact_dim(n: u32, cap: u32) -> Result<()> {
    check_dim(n)?;
    if n > cap {
        return Err(Error::TooLarge { dim: n, limit: cap });
    }
    Ok(())
}

/// A minimum r-identifying code of length `n`.
pub fn min_identifying(r: u32, n: u32, opts: &ExactOptions) -> Result<ExactOutcome> {
    check_exact_dim(n, EXACT_CAP)?;
    if r >= n {
        return Err(Error::Parameters(format!("identifying codes need r < n, got r={r}, n={n}")));
    }
    let words: Vec<u32> = (0..1u32 << n).collect();
    let problem = Problem::new(n, words.clone(), &words, r, true, symmetry_for(n, opts))?;
    let trivial = counting_bound(1 << n);
    let start = match opts.start {
        StartSize::Registry => Registry::builtin()
            .lookup(r, n)
            .map_or(trivial, |b| b.lower as usize),
        StartSize::Trivial => trivial,
        StartSize::Fixed(s) => s,
    };
    let (code, proven, nodes) = solve(&problem, start, opts);
    let code = match code {
        Some(c) => c,
        None => greedy_construct(r, n, 0)?,
    };
    let v = verify_identifying(&code, r)?;
    if let Some(witness) = v.witness {
        return Err(Error::NotIdentifying { r, witness });
    }
    Ok(ExactOutcome {
        code,
        proven_minimal: proven,
        nodes,
        start_size: start,
    })
}

/// A minimum r-discriminating code in F^n (`r` odd): even codewords, odd
/// vertices covered and pairwise separated.
pub fn min_discriminating(r: u32, n: u32, opts: &ExactOptions) -> Result<ExactOutcome> {
    check_exact_dim(n, EXACT_CAP + 1)?;
    if r.is_multiple_of(2) {
        return Err(Error::EvenRadius(r));
    }
    if r >= n {
        return Err(Error::Parameters(format!("need r < n, got r={r}, n={n}")));
    }
    let even: Vec<u32> = (0..1u32 << n).filter(|w| w.count_ones() % 2 == 0).collect();
    let odd: Vec<u32> = (0..1u32 << n).filter(|w| w.count_ones() % 2 == 1).collect();
    let problem = Problem::new(n, even, &odd, r, true, symmetry_for(n, opts))?;
    let trivial = counting_bound(odd.len() as u64);
    let start = match opts.start {
        StartSize::Fixed(s) => s,
        _ => trivial,
    };
    let (code, proven, nodes) = solve(&problem, start, opts);
    let code = match code {
        Some(c) => c,
        // every even word is a codeword: the largest candidate code
        None => problem.code(u64::MAX >> (64 - problem.candidates.len())),
    };
    let rep = crate::convert::is_discriminating(&code, r)?;
    if let Some(witness) = rep.verification.witness {
        return Err(Error::NotIdentifying { r, witness });
    }
    Ok(ExactOutcome {
        code,
        proven_minimal: proven,
        nodes,
        start_size: start,
    })
}

/// A minimum k-separating code of F^p, `0 ≤ k ≤ p - 1`, `p ≤ 5`.
///
/// When the registry knows `M_k(p)` exactly, the size is checked to be
/// `M_k(p)` or `M_k(p) - 1`.
pub fn min_separating(p: u32, k: u32, opts: &ExactOptions) -> Result<ExactOutcome> {
    check_exact_dim(p, SEPARATING_CAP)?;
    if k >= p {
        return Err(Error::Parameters(format!("need 0 <= k <= p - 1, got p={p}, k={k}")));
    }
    let words: Vec<u32> = (0..1u32 << p).collect();
    let problem = Problem::new(p, words.clone(), &words, k, false, symmetry_for(p, opts))?;
    let start = match opts.start {
        StartSize::Fixed(s) => s,
        // distinct signatures, one of which may be empty
        _ => counting_bound((1u64 << p) - 1),
    };
    let (code, proven, nodes) = solve(&problem, start, opts);
    // F^p minus a word is always separating
    let code = match code {
        Some(c) => c,
        None => Code::full_minus_zero(p)?,
    };
    if !is_separating(&code, k)? {
        return Err(Error::NotSeparating {
            k,
            witness: verify_identifying(&code, k)?.witness.expect("ns > 0 has a witness"),
        });
    }
    if proven && k >= 1 {
        check_separating_bracket(p, k, code.len())?;
    }
    Ok(ExactOutcome {
        code,
        proven_minimal: proven,
        nodes,
        start_size: start,
    })
}

fn check_separating_bracket(p: u32, k: u32, size: usize) -> Result<()> {
    let Some(m) = Registry::builtin().exact_value(k, p) else {
        return Ok(());
    };
    let size = size as u64;
    if size == m || size + 1 == m {
        Ok(())
    } else {
        Err(Error::Parameters(format!(
            "minimum {k}-separating size {size} in F^{p} is not M_{k}({p}) = {m} or one less"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial() -> ExactOptions {
        ExactOptions {
            start: StartSize::Trivial,
            ..ExactOptions::default()
        }
    }

    #[test]
    fn tiny_minima() {
        for (r, n, want) in [(1, 2, 3), (1, 3, 4), (1, 4, 7), (2, 3, 7), (2, 4, 6), (3, 4, 15)] {
            let out = min_identifying(r, n, &trivial()).unwrap();
            assert_eq!(out.code.len(), want, "M_{r}({n})");
            assert!(out.proven_minimal);
            assert!(out.code.contains(0));
        }
    }

    #[test]
    fn symmetry_does_not_change_answers() {
        for (r, n) in [(1, 3), (1, 4), (2, 4), (2, 5)] {
            let on = min_identifying(r, n, &ExactOptions { symmetry: Some(true), ..trivial() }).unwrap();
            let off = min_identifying(r, n, &ExactOptions { symmetry: Some(false), ..trivial() }).unwrap();
            assert_eq!(on.code.len(), off.code.len());
            assert!(on.nodes <= off.nodes);
        }
    }

    #[test]
    fn separating_examples() {
        assert!(is_separating(&Code::from_bit_strings("000 001 100").unwrap(), 1).unwrap());
        for (p, k, want) in [(3, 1, 3), (4, 1, 6), (3, 0, 7), (3, 2, 7)] {
            let out = min_separating(p, k, &ExactOptions::default()).unwrap();
            assert_eq!(out.code.len(), want, "p={p} k={k}");
            assert!(is_separating(&out.code, k).unwrap());
        }
        assert!(min_separating(3, 3, &ExactOptions::default()).is_err());
        assert!(min_separating(6, 1, &ExactOptions::default()).is_err());
        assert!(is_separating(&Code::full(3).unwrap(), 4).is_err());
    }

    #[test]
    fn budget_exhaustion_falls_back() {
        let opts = ExactOptions {
            max_nodes: Some(5),
            ..trivial()
        };
        let out = min_identifying(1, 5, &opts).unwrap();
        assert!(!out.proven_minimal);
        assert!(crate::signature::is_identifying(&out.code, 1).unwrap());
    }

    #[test]
    fn bad_parameters() {
        assert!(min_identifying(3, 3, &trivial()).is_err());
        assert!(min_identifying(1, 7, &trivial()).is_err());
        assert!(min_discriminating(2, 4, &trivial()).is_err());
    }

    #[test]
    fn minimal_sets_drop_supersets() {
        assert_eq!(minimal_sets(vec![0b111, 0b011, 0b011, 0b100]), vec![0b100, 0b011]);
    }
}
