use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{certify, check_params, pick};
use crate::code::Code;
use crate::error::{Error, Result};
use crate::signature::{DeltaScratch, SignatureTable};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoisingParams {
    /// Size of the random starting code.
    pub target_size: usize,
    /// Noise amplitude at the start of each schedule pass.
    pub rho_init: f64,
    /// The amplitude drops by `rho_init / rho_steps` per step, ending at 0.
    pub rho_steps: u32,
    /// Full cycles through the codewords at each amplitude.
    pub sweeps_per_rho: u32,
    /// Total codeword visits (elementary transformations) allowed.
    pub max_iterations: u64,
    pub seed: u64,
    /// Stop as soon as an identifying code of this size or smaller is found.
    pub stop_size: Option<usize>,
}

impl NoisingParams {
    pub fn new(r: u32, target_size: usize, seed: u64) -> Self {
        Self {
            target_size,
            rho_init: f64::from(2 * r + 1),
            rho_steps: 100,
            sweeps_per_rho: 1,
            max_iterations: 2_000_000,
            seed,
            stop_size: None,
        }
    }

    fn validate(&self, n: u32) -> Result<()> {
        let bad = |msg: &str| Err(Error::Parameters(msg.to_string()));
        if self.target_size == 0 || self.target_size as u64 > 1u64 << n {
            return bad("target size must be between 1 and 2^n");
        }
        if !(self.rho_init >= 0.0 && self.rho_init.is_finite()) {
            return bad("rho_init must be a finite number >= 0");
        }
        if self.rho_steps == 0 || self.sweeps_per_rho == 0 || self.max_iterations == 0 {
            return bad("rho_steps, sweeps_per_rho and max_iterations must be >= 1");
        }
        Ok(())
    }

    /// Amplitude at step `i` of a pass, `0 ≤ i ≤ rho_steps`.
    pub fn rho_at(&self, i: u32) -> f64 {
        self.rho_init * f64::from(self.rho_steps - i) / f64::from(self.rho_steps)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    /// Smallest identifying code found.
    pub best_code: Option<Code>,
    /// 0 when a code was found, otherwise the lowest `f` reached.
    pub best_f: u64,
    pub iterations_used: u64,
    /// `(size, iteration)` for every identifying code met along the way.
    pub sizes_achieved: Vec<(usize, u64)>,
}

impl SearchReport {
    pub fn best_size(&self) -> Option<usize> {
        self.best_code.as_ref().map(Code::len)
    }

    /// One `key=value` line, for logs.
    pub fn summary(&self) -> String {
        let sizes: Vec<String> = self
            .sizes_achieved
            .iter()
            .map(|(s, i)| format!("{s}@{i}"))
            .collect();
        format!(
            "best_size={} best_f={} iterations={} sizes=[{}]",
            self.best_size().map_or("none".into(), |s| s.to_string()),
            self.best_f,
            self.iterations_used,
            sizes.join(",")
        )
    }
}

/// One codeword visit, as seen by an observer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub iteration: u64,
    pub rho: f64,
    /// Smallest plain `Δ` over the candidates.
    pub delta: i64,
    pub accepted: bool,
    /// `f` after the visit.
    pub f: u64,
}

/// Runs the noising method for r-identifying codes of length `n`.
pub fn noising_search(r: u32, n: u32, params: &NoisingParams) -> Result<SearchReport> {
    noising_search_observed(r, n, params, |_| {})
}

pub fn noising_search_observed(
    r: u32,
    n: u32,
    params: &NoisingParams,
    mut observe: impl FnMut(&Step),
) -> Result<SearchReport> {
    check_params(r, n)?;
    params.validate(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let size = 1u32 << n;
    let start = sample(&mut rng, size as usize, params.target_size);
    let code = Code::new(n, start.into_iter().map(|i| i as u32))?;
    let mut table = SignatureTable::build(&code, r)?;
    let mut scratch = DeltaScratch::new();
    let mut ties = Vec::new();

    let mut report = SearchReport {
        best_code: None,
        best_f: table.evaluation().f,
        iterations_used: 0,
        sizes_achieved: Vec::new(),
    };
    // Returns true when the search should stop.
    let on_success = |table: &mut SignatureTable,
                          report: &mut SearchReport,
                          rng: &mut ChaCha8Rng,
                          scratch: &mut DeltaScratch,
                          ties: &mut Vec<u32>|
     -> Result<bool> {
        let found = certify(table.code(), r)?;
        report.sizes_achieved.push((found.len(), report.iterations_used));
        let len = found.len();
        report.best_code = Some(found);
        report.best_f = 0;
        if params.stop_size.is_some_and(|s| len <= s) || len <= 1 {
            return Ok(true);
        }
        // drop a codeword m minimizing f(C \ {m})
        let mut best = i64::MAX;
        ties.clear();
        let slots: Vec<u32> = table.codewords().map(|(slot, _)| slot).collect();
        for slot in slots {
            let d = table.remove_delta_with(scratch, slot)?;
            if d < best {
                best = d;
                ties.clear();
            }
            if d == best {
                ties.push(slot);
            }
        }
        let slot = pick(rng, ties);
        table.remove(slot)?;
        Ok(false)
    };

    if table.evaluation().is_zero()
        && on_success(&mut table, &mut report, &mut rng, &mut scratch, &mut ties)?
    {
        return Ok(report);
    }
    let mut order: Vec<u32> = table.codewords().map(|(slot, _)| slot).collect();
    let mut cursor = 0usize;
    'outer: loop {
        for step in 0..=params.rho_steps {
            let rho = params.rho_at(step);
            for _ in 0..params.sweeps_per_rho {
                let visits = order.len();
                for _ in 0..visits {
                    if report.iterations_used >= params.max_iterations {
                        break 'outer;
                    }
                    report.iterations_used += 1;
                    if cursor >= order.len() {
                        cursor = 0;
                    }
                    let slot = order[cursor];
                    cursor += 1;

                    let mut best = i64::MAX;
                    ties.clear();
                    for s in 0..size {
                        if table.is_codeword(s) {
                            continue;
                        }
                        let d = table.swap_delta_with(&mut scratch, slot, s)?;
                        if d < best {
                            best = d;
                            ties.clear();
                        }
                        if d == best {
                            ties.push(s);
                        }
                    }
                    if ties.is_empty() {
                        // the code is all of F^n; nothing to swap in
                        continue;
                    }
                    // one R per transformation, so the noisy minimizer is the plain one
                    let accepted = if best < 0 {
                        true
                    } else {
                        let u: f64 = loop {
                            let u = rng.gen::<f64>();
                            if u > 0.0 {
                                break u;
                            }
                        };
                        best as f64 + rho * u.ln() < 0.0
                    };
                    if accepted {
                        let s = pick(&mut rng, &ties);
                        table.apply_swap(slot, s)?;
                    }
                    let f = table.evaluation().f;
                    observe(&Step {
                        iteration: report.iterations_used,
                        rho,
                        delta: best,
                        accepted,
                        f,
                    });
                    if report.best_code.is_none() {
                        report.best_f = report.best_f.min(f);
                    }
                    if accepted && f == 0 {
                        if on_success(&mut table, &mut report, &mut rng, &mut scratch, &mut ties)? {
                            break 'outer;
                        }
                        order = table.codewords().map(|(slot, _)| slot).collect();
                        cursor = 0;
                    }
                }
            }
        }
    }
    Ok(report)
}
