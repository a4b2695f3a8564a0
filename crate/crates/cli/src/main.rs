//! `idcode`: verify, build, extend, prune and convert identifying codes.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use idcode_core::bounds::{Classification, Registry};
use idcode_core::heuristics::{greedy_construct_with, noising_search, prune, GreedyOptions, NoisingParams, SearchReport, DEFAULT_RESTARTS};
use idcode_core::{
    is_discriminating, min_discriminating, min_identifying, min_separating, to_discriminating, to_identifying,
    verify_identifying, BitVector, Code, Construction, ExactOptions, ExactOutcome, ExtensionPlan, StartSize, Witness,
};

use io::{read_code, write_code};

#[derive(Parser)]
#[command(name = "idcode", version, about = "Identifying codes in the binary hypercube")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for multi-seed runs.
    #[arg(long, global = true, env = "IDCODE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a code file is r-identifying (or r-discriminating).
    Verify {
        file: PathBuf,
        /// Radius; defaults to the r= value in the file header.
        #[arg(long)]
        r: Option<u32>,
        /// Check the discriminating property: even codewords, odd vertices.
        #[arg(long)]
        discriminating: bool,
    },
    /// Build a code from scratch with a heuristic.
    Construct {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u32,
        /// Starting size for noising (required there).
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run this many consecutive seeds in parallel and keep the best.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long)]
        rho_init: Option<f64>,
        #[arg(long)]
        rho_steps: Option<u32>,
        #[arg(long)]
        sweeps_per_rho: Option<u32>,
        #[arg(long)]
        max_iterations: Option<u64>,
        /// Stop noising once a code this small is found.
        #[arg(long)]
        stop_size: Option<usize>,
        /// Greedy: price only this many random candidates per step.
        #[arg(long)]
        candidate_sample: Option<usize>,
        /// Prune the result with this many restarts.
        #[arg(long)]
        prune: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Extend a code to length n + p (and radius r + r2).
    Extend {
        file: PathBuf,
        /// Radius of the input code; defaults to the file header.
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 0)]
        r2: u32,
        /// Use construction C2 with a k-separating tail code.
        #[arg(long)]
        k: Option<u32>,
        /// k-separating code of length p; computed exactly when omitted.
        #[arg(long, requires = "k")]
        separ: Option<PathBuf>,
        /// Skip the parameter range checks.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Remove unneeded codewords.
    Prune {
        file: PathBuf,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Move between identifying codes in F^n and discriminating codes in F^(n+1).
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        /// Odd radius used to verify the result; defaults to the file header.
        #[arg(long)]
        r: Option<u32>,
        /// Coordinate to delete (1-based) when going to identifying; default last.
        #[arg(long)]
        pos: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Exhaustive minimum code for small lengths.
    Exact {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u32,
        /// Minimum r-discriminating code in F^n instead.
        #[arg(long, conflicts_with = "separating")]
        discriminating: bool,
        /// Minimum r-separating code in F^n instead.
        #[arg(long)]
        separating: bool,
        #[arg(long, value_enum, default_value_t = Start::Registry)]
        start: Start,
        /// Coordinate-permutation pruning (default: on for n <= 5).
        #[arg(long)]
        symmetry: Option<bool>,
        #[arg(long)]
        max_nodes: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Query and check the table of known bounds.
    Bounds {
        /// Recheck every relation in the table.
        #[arg(long)]
        check: bool,
        /// Verify a code file and place its size against the table.
        #[arg(long, value_name = "FILE")]
        compare: Option<PathBuf>,
        /// Print one cell (needs --r and --n).
        #[arg(long)]
        lookup: bool,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
    },
}

#[derive(clap::Args)]
struct Output {
    /// Write the code here (atomically); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the code even if it fails verification.
    #[arg(long)]
    unchecked: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Greedy,
    Noising,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Discriminating,
    Identifying,
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    Registry,
    Trivial,
}

/// What a subcommand concluded, before it becomes an exit code.
enum Verdict {
    Holds,
    Fails,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Verdict::Holds) => ExitCode::SUCCESS,
        Ok(Verdict::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn radius(flag: Option<u32>, header: Option<u32>) -> Result<u32> {
    flag.or(header)
        .ok_or_else(|| anyhow!("no radius: pass --r or put r=<R> in the file header"))
}

fn show_witness(w: &Witness, dim: u32) -> String {
    let bits = |v: u32| BitVector::new(v, dim).map_or(v.to_string(), |b| b.to_string());
    match *w {
        Witness::Uncovered { vertex } => format!("uncovered vertex {}", bits(vertex)),
        Witness::Unseparated { first, second } => {
            format!("vertices {} and {} share a signature", bits(first), bits(second))
        }
    }
}

fn emit(json: bool, value: Value, text: String) {
    if json {
        println!("{value}");
    } else {
        println!("{text}");
    }
}

/// Prints a report: to stdout when the code goes to a file, else to stderr
/// so stdout carries only the code.
fn note(json: bool, out: &Output, value: Value, text: String) {
    let line = if json { value.to_string() } else { text };
    if out.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn run(cli: &Cli) -> Result<Verdict> {
    let json = cli.json;
    match &cli.command {
        Command::Verify { file, r, discriminating } => {
            let cf = read_code(file)?;
            let r = radius(*r, cf.radius)?;
            let code = &cf.code;
            let (v, property) = if *discriminating {
                (is_discriminating(code, r)?.verification, "discriminating")
            } else {
                (verify_identifying(code, r)?, "identifying")
            };
            let e = v.evaluation;
            let verdict = if v.holds() { "PASS" } else { "FAIL" };
            let mut text = format!(
                "n={} r={} size={} nc={} ns={} {property}: {verdict}",
                code.dim(),
                r,
                code.len(),
                e.nc,
                e.ns
            );
            if let Some(w) = &v.witness {
                text.push_str(&format!("\n{}", show_witness(w, code.dim())));
            }
            emit(
                json,
                json!({
                    "n": code.dim(), "r": r, "size": code.len(), "property": property,
                    "nc": e.nc, "ns": e.ns, "f": e.f, "holds": v.holds(), "witness": v.witness,
                }),
                text,
            );
            Ok(if v.holds() { Verdict::Holds } else { Verdict::Fails })
        }
        Command::Construct {
            method,
            r,
            n,
            size,
            seed,
            seeds,
            rho_init,
            rho_steps,
            sweeps_per_rho,
            max_iterations,
            stop_size,
            candidate_sample,
            prune: restarts,
            out,
        } => {
            if *seeds == 0 {
                bail!("--seeds must be at least 1");
            }
            let seed_list: Vec<u64> = (0..*seeds).map(|i| seed.wrapping_add(i)).collect();
            let (code, info) = match method {
                Method::Greedy => {
                    let opts = GreedyOptions {
                        candidate_sample: *candidate_sample,
                    };
                    let results: Vec<(u64, Code)> = seed_list
                        .par_iter()
                        .map(|&s| greedy_construct_with(*r, *n, s, opts).map(|c| (s, c)))
                        .collect::<idcode_core::Result<_>>()?;
                    let (s, c) = results
                        .into_iter()
                        .min_by_key(|(s, c)| (c.len(), *s))
                        .expect("at least one seed");
                    (c, json!({"method": "greedy", "seed": s}))
                }
                Method::Noising => {
                    let size = size.ok_or_else(|| anyhow!("--size is required with --method noising"))?;
                    let mut params = NoisingParams::new(*r, size, *seed);
                    if let Some(v) = rho_init {
                        params.rho_init = *v;
                    }
                    if let Some(v) = rho_steps {
                        params.rho_steps = *v;
                    }
                    if let Some(v) = sweeps_per_rho {
                        params.sweeps_per_rho = *v;
                    }
                    if let Some(v) = max_iterations {
                        params.max_iterations = *v;
                    }
                    params.stop_size = *stop_size;
                    let reports: Vec<(u64, SearchReport)> = seed_list
                        .par_iter()
                        .map(|&s| noising_search(*r, *n, &NoisingParams { seed: s, ..params }).map(|rep| (s, rep)))
                        .collect::<idcode_core::Result<_>>()?;
                    for (s, rep) in &reports {
                        note(
                            json,
                            out,
                            json!({"seed": s, "best_size": rep.best_size(), "best_f": rep.best_f,
                                   "iterations": rep.iterations_used, "sizes_achieved": rep.sizes_achieved}),
                            format!("seed={s} {}", rep.summary()),
                        );
                    }
                    let best = reports
                        .into_iter()
                        .filter_map(|(s, rep)| rep.best_code.map(|c| (s, c)))
                        .min_by_key(|(s, c)| (c.len(), *s));
                    match best {
                        Some((s, c)) => (c, json!({"method": "noising", "seed": s})),
                        None => {
                            eprintln!("no identifying code found within the budget");
                            return Ok(Verdict::Fails);
                        }
                    }
                }
            };
            let code = match restarts {
                Some(k) => prune(&code, *r, *k, *seed)?,
                None => code,
            };
            finish(json, out, &code, *r, info)
        }
        Command::Extend {
            file,
            r,
            p,
            r2,
            k,
            separ,
            force,
            out,
        } => {
            let cf = read_code(file)?;
            let r1 = radius(*r, cf.radius)?;
            let construction = match k {
                None => Construction::C1,
                Some(k) => {
                    let separ = match separ {
                        Some(path) => read_code(path)?.code,
                        None => min_separating(*p, *k, &ExactOptions::default())
                            .context("computing a separating code for --k")?
                            .code,
                    };
                    Construction::C2 { k: *k, separ }
                }
            };
            let plan = ExtensionPlan::new(&cf.code, r1, *p, *r2, construction, *force)?;
            let code = plan.construct()?;
            let report = plan.report(&code, false)?;
            let info = json!({
                "x_size": report.x_size, "y_size": report.y_size, "separ_size": report.separ_size,
                "size": report.size, "radius": report.radius, "dim": report.dim,
            });
            finish(json, out, &code, plan.radius(), info)
        }
        Command::Prune {
            file,
            r,
            restarts,
            seed,
            out,
        } => {
            let cf = read_code(file)?;
            let r = radius(*r, cf.radius)?;
            let code = prune(&cf.code, r, *restarts, *seed)?;
            finish(json, out, &code, r, json!({"input_size": cf.code.len()}))
        }
        Command::Convert { file, to, r, pos, out } => {
            let cf = read_code(file)?;
            let r = radius(*r, cf.radius)?;
            match to {
                Target::Discriminating => {
                    let code = to_discriminating(&cf.code)?;
                    let v = is_discriminating(&code, r)?.verification;
                    write_verified(json, out, &code, r, v.holds(), v.witness, json!({"to": "discriminating"}))
                }
                Target::Identifying => {
                    let code = to_identifying(&cf.code, *pos)?;
                    finish(json, out, &code, r, json!({"to": "identifying"}))
                }
            }
        }
        Command::Exact {
            r,
            n,
            discriminating,
            separating,
            start,
            symmetry,
            max_nodes,
            out,
        } => {
            let opts = ExactOptions {
                max_nodes: *max_nodes,
                symmetry: *symmetry,
                start: match start {
                    Start::Registry => StartSize::Registry,
                    Start::Trivial => StartSize::Trivial,
                },
            };
            let outcome: ExactOutcome = if *discriminating {
                min_discriminating(*r, *n, &opts)?
            } else if *separating {
                min_separating(*n, *r, &opts)?
            } else {
                min_identifying(*r, *n, &opts)?
            };
            note(
                json,
                out,
                json!({"r": r, "n": n, "size": outcome.code.len(), "proven_minimal": outcome.proven_minimal,
                       "nodes": outcome.nodes, "start_size": outcome.start_size}),
                format!(
                    "r={r} n={n} size={} proven_minimal={} nodes={} start_size={}",
                    outcome.code.len(),
                    outcome.proven_minimal,
                    outcome.nodes,
                    outcome.start_size
                ),
            );
            // the search verifies its own output
            write_code(out.out.as_deref(), &outcome.code, Some(*r))?;
            Ok(Verdict::Holds)
        }
        Command::Bounds {
            check,
            compare,
            lookup,
            r,
            n,
        } => bounds(json, *check, compare.as_deref(), *lookup, *r, *n),
    }
}

/// Verifies at radius `r`, then writes (or refuses to).
fn finish(json: bool, out: &Output, code: &Code, r: u32, info: Value) -> Result<Verdict> {
    let v = verify_identifying(code, r)?;
    write_verified(json, out, code, r, v.holds(), v.witness, info)
}

fn write_verified(
    json: bool,
    out: &Output,
    code: &Code,
    r: u32,
    holds: bool,
    witness: Option<Witness>,
    info: Value,
) -> Result<Verdict> {
    let text = format!(
        "n={} r={} size={} verified={}{}",
        code.dim(),
        r,
        code.len(),
        holds,
        witness.map_or(String::new(), |w| format!(" ({})", show_witness(&w, code.dim())))
    );
    note(
        json,
        out,
        json!({"n": code.dim(), "r": r, "size": code.len(), "verified": holds, "witness": witness, "info": info}),
        text,
    );
    if !holds && !out.unchecked {
        eprintln!("refusing to write a code that fails verification (pass --unchecked to override)");
        return Ok(Verdict::Fails);
    }
    write_code(out.out.as_deref(), code, Some(r))?;
    Ok(if holds { Verdict::Holds } else { Verdict::Fails })
}

fn bounds(
    json: bool,
    check: bool,
    compare: Option<&std::path::Path>,
    lookup: bool,
    r: Option<u32>,
    n: Option<u32>,
) -> Result<Verdict> {
    let reg = Registry::builtin();
    let mut verdict = Verdict::Holds;
    let mut did = false;
    if check {
        did = true;
        let report = reg.check_consistency();
        let failures = report.failures();
        if json {
            println!("{}", json!({"checks": report.checks.len(), "failures": failures}));
        } else {
            for f in &failures {
                println!("FAIL {}: {}", f.name, f.detail);
            }
            println!("{} checks, {} failures", report.checks.len(), failures.len());
        }
        if !failures.is_empty() {
            verdict = Verdict::Fails;
        }
    }
    if let Some(path) = compare {
        did = true;
        let cf = read_code(path)?;
        let r = radius(r, cf.radius)?;
        let v = verify_identifying(&cf.code, r)?;
        if let Some(w) = v.witness {
            emit(
                json,
                json!({"verified": false, "witness": w}),
                format!("not {r}-identifying: {}", show_witness(&w, cf.code.dim())),
            );
            return Ok(Verdict::Fails);
        }
        let n = cf.code.dim();
        let rec = reg.lookup(r, n)?;
        let class = reg.classify_size(r, n, cf.code.len() as u64)?;
        emit(
            json,
            json!({"r": r, "n": n, "size": cf.code.len(), "lower": rec.lower, "upper": rec.upper,
                   "classification": class}),
            format!("r={r} n={n} size={} bounds=[{}, {}] {class}", cf.code.len(), rec.lower, rec.upper),
        );
        if class == Classification::ViolatesLower {
            verdict = Verdict::Fails;
        }
    }
    if lookup {
        did = true;
        let (Some(r), Some(n)) = (r, n) else {
            bail!("--lookup needs --r and --n");
        };
        let rec = reg.lookup(r, n)?;
        let history: Vec<_> = reg.history(r, n).into_iter().cloned().collect();
        emit(json, json!({"current": rec, "history": history}), rec.to_string());
    }
    if !did {
        if json {
            println!("{}", serde_json::to_string(reg.records())?);
        } else {
            for rec in reg.records() {
                println!("{rec}");
            }
        }
    }
    Ok(verdict)
}
