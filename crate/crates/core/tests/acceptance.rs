//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use idcode_core::bounds::{Classification, Registry};
use idcode_core::exact::{is_separating, min_discriminating, min_identifying, min_separating, ExactOptions, StartSize};
use idcode_core::extend::{compute_x_set, cover_annulus, Construction, ExtensionPlan};
use idcode_core::fixtures;
use idcode_core::heuristics::{greedy_construct, noising_search, prune, NoisingParams};
use idcode_core::signature::{verify_identifying, DeltaScratch, SignatureTable};
use idcode_core::{is_discriminating, is_identifying, to_discriminating, BitVector, Code, Witness};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn trivial_start() -> ExactOptions {
    ExactOptions {
        start: StartSize::Trivial,
        ..ExactOptions::default()
    }
}

fn exact_minima() -> Outcome {
    let cases = [
        (1, 2, 3),
        (1, 3, 4),
        (1, 4, 7),
        (1, 5, 10),
        (2, 3, 7),
        (2, 4, 6),
        (2, 5, 6),
        (3, 4, 15),
        (4, 5, 31),
        (5, 6, 63),
    ];
    let mut found = Vec::new();
    for (r, n, want) in cases {
        let t = Instant::now();
        let out = min_identifying(r, n, &trivial_start()).map_err(|e| e.to_string())?;
        let limit = if (r, n) == (1, 5) { 300 } else { 10 };
        within(t, Duration::from_secs(limit), &format!("M_{r}({n})"))?;
        ensure(out.proven_minimal, || format!("M_{r}({n}) not proven"))?;
        ensure(out.code.len() == want, || format!("M_{r}({n}) = {}, expected {want}", out.code.len()))?;
        ensure(common::identifying(out.code.words(), n, r), || format!("M_{r}({n}) code fails the oracle"))?;
        found.push(format!("M_{r}({n})={}", out.code.len()));
    }
    Ok(found.join(" "))
}

fn published_code() -> Outcome {
    let t = Instant::now();
    let code = fixtures::r1_n9_114();
    let v = verify_identifying(&code, 1).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(1), "verification")?;
    ensure(code.len() == 114 && code.dim() == 9, || "fixture is not a length-9, size-114 code".into())?;
    ensure(v.holds(), || format!("fixture fails: {:?}", v.witness))?;
    let class = Registry::builtin().classify_size(1, 9, 114).map_err(|e| e.to_string())?;
    ensure(class == Classification::MatchesUpper, || format!("classified {class}"))?;
    Ok(format!("(1,9)114 verified in {:?}, {class}", t.elapsed()))
}

fn separating_fixtures() -> Outcome {
    let t = Instant::now();
    let c = Code::from_bit_strings("000 001 100").unwrap();
    ensure(is_separating(&c, 1).unwrap(), || "{000,001,100} not 1-separating".into())?;
    let v = verify_identifying(&c, 1).unwrap();
    ensure(v.witness == Some(Witness::Uncovered { vertex: 0b111 }), || {
        format!("expected 111 uncovered, got {:?}", v.witness)
    })?;
    for p in 1..=8 {
        let punctured = Code::full_minus_zero(p).unwrap();
        for delta in 0..p {
            ensure(is_separating(&punctured, delta).unwrap(), || {
                format!("F^{p} minus zero not {delta}-separating")
            })?;
        }
    }
    for (p, k, want) in [(3, 1, 3), (4, 1, 6)] {
        let out = min_separating(p, k, &ExactOptions::default()).map_err(|e| e.to_string())?;
        ensure(out.code.len() == want, || format!("min_separating({p},{k}) = {}", out.code.len()))?;
        ensure(common::separating(out.code.words(), p, k), || "oracle disagrees".into())?;
    }
    within(t, Duration::from_secs(60), "separating fixtures")?;
    Ok("three-word 1-separating code, punctured spaces p<=8, min_separating(3,1)=3, (4,1)=6".into())
}

fn conversion_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = Vec::new();
    for i in 0..200u64 {
        let r = if rng.gen_bool(0.5) { 1 } else { 3 };
        let n = rng.gen_range((r + 1).max(3)..=10);
        let greedy = greedy_construct(r, n, i).map_err(|e| e.to_string())?;
        let code = prune(&greedy, r, 2, i).map_err(|e| e.to_string())?;
        let d = to_discriminating(&code).unwrap();
        if !is_discriminating(&d, r).unwrap().holds() {
            failures.push(format!("({r},{n}) seed {i}: parity extension not discriminating"));
        }
        for pos in 1..=n + 1 {
            let back = d.delete_coordinate(pos).unwrap();
            if back.len() != code.len() || !is_identifying(&back, r).unwrap() {
                failures.push(format!("({r},{n}) seed {i}: deleting coordinate {pos} fails"));
            }
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok("200 codes, every deletion identifying".into())
}

fn discriminating_transposition() -> Outcome {
    let mut found = Vec::new();
    for n in 2..=4 {
        let m = min_identifying(1, n, &trivial_start()).map_err(|e| e.to_string())?;
        let d = min_discriminating(1, n + 1, &trivial_start()).map_err(|e| e.to_string())?;
        ensure(m.proven_minimal && d.proven_minimal, || "search not exhaustive".into())?;
        ensure(common::discriminating(d.code.words(), n + 1, 1), || "oracle rejects discriminating code".into())?;
        ensure(m.code.len() == d.code.len(), || {
            format!("M_1({n}) = {} but D_1({}) = {}", m.code.len(), n + 1, d.code.len())
        })?;
        found.push(format!("D_1({})=M_1({n})={}", n + 1, m.code.len()));
    }
    Ok(found.join(" "))
}

fn base_codes() -> Vec<(u32, Code)> {
    let mut bases = Vec::new();
    for (r, n) in [(1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (3, 5)] {
        bases.push((r, min_identifying(r, n, &ExactOptions::default()).unwrap().code));
    }
    for (r, n, seed) in [(1, 6, 1), (2, 6, 2), (3, 6, 3), (1, 7, 4), (2, 7, 5), (3, 7, 6), (4, 7, 7)] {
        let g = greedy_construct(r, n, seed).unwrap();
        bases.push((r, prune(&g, r, 4, seed).unwrap()));
    }
    bases
}

#[derive(Default)]
struct Tally {
    runs: usize,
    fast_paths: usize,
    failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, label: String, plan: Result<ExtensionPlan, idcode_core::Error>) {
        let built = plan.and_then(|p| {
            let empty = p.x_set().is_empty();
            p.build().map(|e| (e, empty))
        });
        match built {
            Ok((ext, empty)) => {
                self.runs += 1;
                if empty {
                    self.fast_paths += 1;
                }
                let n = ext.code.dim();
                if n <= 10 && !common::identifying(ext.code.words(), n, ext.report.radius) {
                    self.failures.push(format!("{label}: oracle rejects output"));
                }
            }
            Err(e) => self.failures.push(format!("{label}: {e}")),
        }
    }
}

fn extension_matrix() -> Outcome {
    let bases = base_codes();
    let three_word = Code::from_bit_strings("000 001 100").unwrap();
    let mut tally = Tally::default();
    for (r, base) in &bases {
        let (r, n) = (*r, base.dim());
        // length only, construction C1, including p >= r + 1
        for p in 1..=(r + 2).min(12 - n) {
            tally.record(format!("C1 ({r},{n}) p={p}"), ExtensionPlan::new(base, r, p, 0, Construction::C1, false));
        }
        // construction C2 with the three-word tail, and with F^2 minus zero for k = 0, 1
        if n + 3 <= 12 {
            let c2 = Construction::C2 { k: 1, separ: three_word.clone() };
            tally.record(format!("C2 ({r},{n}) p=3 k=1"), ExtensionPlan::new(base, r, 3, 0, c2, false));
        }
        if n + 2 <= 12 {
            for k in 0..2 {
                let c2 = Construction::C2 { k, separ: Code::full_minus_zero(2).unwrap() };
                tally.record(format!("C2 ({r},{n}) p=2 k={k}"), ExtensionPlan::new(base, r, 2, 0, c2, false));
            }
        }
        // radius growth: r1 >= p >= r2 >= 1
        for p in 1..=r.min(12 - n) {
            for r2 in 1..=p {
                tally.record(
                    format!("C1 ({r},{n}) p={p} r2={r2}"),
                    ExtensionPlan::new(base, r, p, r2, Construction::C1, false),
                );
            }
        }
        // X-chain X_1 ⊇ X_2 ⊇ ... ⊇ X_r
        let chain: Vec<Vec<BitVector>> = (1..=r).map(|p| compute_x_set(base, r, p, 0).unwrap()).collect();
        for (p, w) in chain.windows(2).enumerate() {
            if !w[1].iter().all(|x| w[0].contains(x)) {
                tally.failures.push(format!("({r},{n}): X_{} not contained in X_{}", p + 2, p + 1));
            }
        }
        if !compute_x_set(base, r, r + 1, 0).unwrap().is_empty() {
            tally.failures.push(format!("({r},{n}): X_(r+1) nonempty"));
        }
    }
    // the smallest radius-growth instance r1 = p = r2 = 1 on exact bases
    for (r, base) in bases.iter().filter(|(r, b)| *r == 1 && b.dim() <= 5) {
        tally.record(
            format!("r1=p=r2=1 on ({r},{})", base.dim()),
            ExtensionPlan::new(base, 1, 1, 1, Construction::C1, false),
        );
    }
    let Tally { runs, fast_paths, failures } = tally;
    ensure(failures.is_empty(), || failures.join("; "))?;
    ensure(runs >= 20, || format!("only {runs} combinations ran"))?;
    ensure(fast_paths > 0, || "no empty-X instance".into())?;
    Ok(format!("{runs} extensions verified ({fast_paths} with empty X), X-chains nested"))
}

fn annulus_example() -> Outcome {
    let x: Vec<BitVector> = ["1100000000", "0011000000", "0000110000", "0000001100", "0000000011"]
        .iter()
        .map(|b| BitVector::from_bits(b).unwrap())
        .collect();
    let size = |d| cover_annulus(&x, d, d, 10).unwrap().len();
    let (s0, s1, s2, s3) = (size(0), size(1), size(2), size(3));
    ensure(s2 == 1, || format!("distance 2 needs {s2}"))?;
    ensure(cover_annulus(&x, 2, 2, 10).unwrap()[0] == BitVector::zero(10).unwrap(), || "not the zero word".into())?;
    ensure(s0 == 5, || format!("distance 0 needs {s0}"))?;
    ensure(s1 > 1 && s3 > 1, || format!("distances 1 and 3 need {s1} and {s3}"))?;
    Ok(format!("sizes at distance 0..3: {s0} {s1} {s2} {s3}"))
}

fn incremental_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut scratch = DeltaScratch::new();
    let mut steps = 0;
    for seq in 0..1000 {
        let n = rng.gen_range(2..=10);
        let r = rng.gen_range(0..n.min(4));
        let size = rng.gen_range(1..(1usize << n));
        let words = rand::seq::index::sample(&mut rng, 1 << n, size).into_iter().map(|i| i as u32);
        let code = Code::new(n, words).unwrap();
        let mut table = SignatureTable::build(&code, r).unwrap();
        for _ in 0..rng.gen_range(1..=6) {
            let slots: Vec<u32> = table.codewords().map(|(s, _)| s).collect();
            let slot = slots[rng.gen_range(0..slots.len())];
            let free: Vec<u32> = (0..1u32 << n).filter(|&w| !table.is_codeword(w)).collect();
            if free.is_empty() {
                break;
            }
            let w = free[rng.gen_range(0..free.len())];
            let before = table.evaluation().f as i64;
            let delta = table.swap_delta_with(&mut scratch, slot, w).unwrap();
            let after = table.apply_swap(slot, w).unwrap();
            let current = table.code();
            let (nc, ns) = common::counts(current.words(), n, r);
            ensure(after.nc == nc && after.ns == ns && after.f == nc + ns, || {
                format!("sequence {seq}: engine ({}, {}, {}) vs oracle ({nc}, {ns})", after.nc, after.ns, after.f)
            })?;
            ensure(before + delta == after.f as i64, || format!("sequence {seq}: predicted delta {delta} is off"))?;
            steps += 1;
        }
    }
    Ok(format!("1000 sequences, {steps} swaps, zero mismatches"))
}

fn heuristic_viability() -> Outcome {
    let t = Instant::now();
    let reports: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=8u64)
            .map(|seed| {
                s.spawn(move || {
                    let params = NoisingParams {
                        stop_size: Some(32),
                        ..NoisingParams::new(1, 32, seed)
                    };
                    noising_search(1, 7, &params)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let noising_time = t.elapsed();
    let mut hits = 0;
    for rep in reports {
        let rep = rep.map_err(|e| e.to_string())?;
        if let Some(c) = rep.best_code.as_ref().filter(|c| c.len() == 32) {
            ensure(common::identifying(c.words(), 7, 1), || "oracle rejects a (1,7)32 code".into())?;
            hits += 1;
        }
    }
    ensure(noising_time <= Duration::from_secs(60), || format!("noising took {noising_time:?}"))?;
    ensure(hits >= 1, || "no seed found a (1,7)32 code".into())?;

    let t = Instant::now();
    let cells: Vec<(u32, u32)> = (1..=3).flat_map(|r| (r + 1..=12).map(move |n| (r, n))).collect();
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = cells
            .iter()
            .map(|&(r, n)| {
                s.spawn(move || {
                    let g = greedy_construct(r, n, u64::from(r * 100 + n))?;
                    let p = prune(&g, r, 4, 1)?;
                    Ok::<_, idcode_core::Error>((r, n, p))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let greedy_time = t.elapsed();
    let reg = Registry::builtin();
    for res in results {
        let (r, n, code) = res.map_err(|e| e.to_string())?;
        ensure(is_identifying(&code, r).unwrap(), || format!("({r},{n}) greedy+prune output fails"))?;
        if n <= 9 {
            ensure(common::identifying(code.words(), n, r), || format!("({r},{n}) oracle rejects"))?;
        }
        let upper = reg.lookup(r, n).unwrap().upper;
        if code.len() as f64 > upper as f64 * 1.1 {
            println!("  note: ({r},{n}) greedy+prune size {} is above the table value {upper} + 10%", code.len());
        }
    }
    ensure(greedy_time <= Duration::from_secs(600), || format!("greedy+prune took {greedy_time:?}"))?;
    Ok(format!(
        "(1,7)32 found by {hits}/8 seeds in {noising_time:.1?}; greedy+prune for {} cells in {greedy_time:.1?}",
        cells.len()
    ))
}

fn registry_consistency() -> Outcome {
    let t = Instant::now();
    let report = Registry::builtin().check_consistency();
    within(t, Duration::from_secs(1), "consistency check")?;
    let failures = report.failures();
    ensure(failures.is_empty(), || format!("{failures:?}"))?;
    Ok(format!("{} checks, 0 failures", report.checks.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact minima", exact_minima),
        ("published (1,9)114 code", published_code),
        ("separating fixtures", separating_fixtures),
        ("conversion round trip", conversion_round_trip),
        ("discriminating = identifying one length down", discriminating_transposition),
        ("extension constructions", extension_matrix),
        ("annulus cover example", annulus_example),
        ("incremental engine vs oracle", incremental_equivalence),
        ("heuristic viability", heuristic_viability),
        ("registry consistency", registry_consistency),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name} [{:.1?}]: {detail}", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name} [{:.1?}]: {why}", i + 1, t.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
