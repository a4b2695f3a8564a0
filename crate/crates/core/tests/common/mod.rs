//! Definitional reference implementations, written independently of the
//! library: signatures are explicit sets, built by scanning every codeword.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub fn dist(a: u32, b: u32) -> u32 {
    (a ^ b).count_ones()
}

/// `B_r(x) ∩ C` as a set of codewords.
pub fn signature(code: &[u32], x: u32, r: u32) -> BTreeSet<u32> {
    code.iter().copied().filter(|&c| dist(c, x) <= r).collect()
}

/// `(NC, NS)` over the vertices accepted by `keep`.
pub fn counts_over(code: &[u32], n: u32, r: u32, keep: impl Fn(u32) -> bool) -> (u64, u64) {
    let mut classes: BTreeMap<BTreeSet<u32>, u64> = BTreeMap::new();
    let mut nc = 0;
    for x in (0..1u32 << n).filter(|&x| keep(x)) {
        let s = signature(code, x, r);
        if s.is_empty() {
            nc += 1;
        }
        *classes.entry(s).or_default() += 1;
    }
    let ns = classes.values().map(|&k| k * (k - 1) / 2).sum();
    (nc, ns)
}

pub fn counts(code: &[u32], n: u32, r: u32) -> (u64, u64) {
    counts_over(code, n, r, |_| true)
}

pub fn identifying(code: &[u32], n: u32, r: u32) -> bool {
    counts(code, n, r) == (0, 0)
}

/// Every pair of vertices gets different signatures (one may be empty).
pub fn separating(code: &[u32], n: u32, k: u32) -> bool {
    counts(code, n, k).1 == 0
}

pub fn discriminating(code: &[u32], n: u32, r: u32) -> bool {
    code.iter().all(|c| c.count_ones() % 2 == 0) && counts_over(code, n, r, |x| x.count_ones() % 2 == 1) == (0, 0)
}

/// Smallest identifying code by trying every subset, smallest first.
/// Only for `2^n ≤ 16`.
pub fn naive_minimum(n: u32, r: u32) -> usize {
    let size = 1u32 << n;
    assert!(size <= 16);
    let mut best = usize::MAX;
    for subset in 0u32..1 << size {
        let k = subset.count_ones() as usize;
        if k >= best {
            continue;
        }
        let code: Vec<u32> = (0..size).filter(|&w| subset >> w & 1 == 1).collect();
        if identifying(&code, n, r) {
            best = k;
        }
    }
    best
}
