//! Registry of known lower and upper bounds on `M_r(n)` for `1 ≤ r ≤ 5`,
//! `r + 1 ≤ n ≤ 21`, with consistency checks over the registry and size
//! classification for newly built codes.
//!
//! The data ships as a plain text file (`data/bounds.txt`, one record per
//! line: `r n lower upper lower_key upper_key`). A cell can appear on more
//! than one line when an upper bound was later improved; the smallest upper
//! bound wins. Lower bounds are trusted data and never recomputed.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::signature::verify_identifying;

const BUILTIN: &str = include_str!("../data/bounds.txt");

pub const MIN_RADIUS: u32 = 1;
pub const MAX_RADIUS: u32 = 5;
pub const MAX_LENGTH: u32 = 21;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub r: u32,
    pub n: u32,
    pub lower: u64,
    pub upper: u64,
    pub lower_key: String,
    pub upper_key: String,
}

impl BoundRecord {
    pub fn exact(&self) -> bool {
        self.lower == self.upper
    }
}

impl fmt::Display for BoundRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M_{}({}) in [{} ({}), {} ({})]",
            self.r, self.n, self.lower, self.lower_key, self.upper, self.upper_key
        )
    }
}

#[derive(Clone, Debug)]
pub struct Registry {
    records: Vec<BoundRecord>,
}

fn in_range(r: u32, n: u32) -> bool {
    (MIN_RADIUS..=MAX_RADIUS).contains(&r) && n > r && n <= MAX_LENGTH
}

impl Registry {
    /// The registry compiled into the crate.
    pub fn builtin() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(|| Registry::parse(BUILTIN).expect("builtin bounds registry parses"))
    }

    pub fn parse(text: &str) -> Result<Registry> {
        let mut records = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            let err = |msg: String| Error::Parse { line, msg };
            if fields.len() != 6 {
                return Err(err(format!("expected 6 fields, found {}", fields.len())));
            }
            let num = |s: &str| -> Result<u64> {
                s.parse::<u64>()
                    .map_err(|_| err(format!("not a number: {s:?}")))
            };
            let rec = BoundRecord {
                r: num(fields[0])? as u32,
                n: num(fields[1])? as u32,
                lower: num(fields[2])?,
                upper: num(fields[3])?,
                lower_key: fields[4].to_string(),
                upper_key: fields[5].to_string(),
            };
            if !in_range(rec.r, rec.n) {
                return Err(err(format!("(r={}, n={}) outside the table range", rec.r, rec.n)));
            }
            if rec.lower > rec.upper {
                return Err(err(format!("lower {} exceeds upper {}", rec.lower, rec.upper)));
            }
            records.push(rec);
        }
        Ok(Registry { records })
    }

    /// Every line, in file order.
    pub fn records(&self) -> &[BoundRecord] {
        &self.records
    }

    /// All lines for one cell, in file order (oldest upper bound first).
    pub fn history(&self, r: u32, n: u32) -> Vec<&BoundRecord> {
        self.records.iter().filter(|b| b.r == r && b.n == n).collect()
    }

    /// The current record for `(r, n)`: its smallest upper bound.
    pub fn lookup(&self, r: u32, n: u32) -> Result<BoundRecord> {
        self.history(r, n)
            .into_iter()
            .min_by_key(|b| b.upper)
            .cloned()
            .ok_or(Error::NoBound { r, n })
    }

    /// Bounds on `D_r(n)` for odd `r`, which equal those on `M_r(n-1)`.
    pub fn lookup_discriminating(&self, r: u32, n: u32) -> Result<BoundRecord> {
        if r.is_multiple_of(2) {
            return Err(Error::EvenRadius(r));
        }
        if n < 2 {
            return Err(Error::NoBound { r, n });
        }
        let mut rec = self.lookup(r, n - 1)?;
        rec.n = n;
        Ok(rec)
    }

    pub fn exact_value(&self, r: u32, n: u32) -> Option<u64> {
        self.lookup(r, n).ok().filter(|b| b.exact()).map(|b| b.lower)
    }

    fn has_upper(&self, r: u32, n: u32, value: u64) -> bool {
        self.history(r, n).iter().any(|b| b.upper == value)
    }

    /// Runs every arithmetic relation tying cells together.
    pub fn check_consistency(&self) -> ConsistencyReport {
        let mut report = ConsistencyReport::default();
        self.check_cells(&mut report);
        self.check_full_length_rows(&mut report);
        self.check_symmetry(&mut report);
        self.check_transposition(&mut report);
        for rel in RELATIONS {
            self.check_relation(rel, &mut report);
        }
        report
    }

    fn check_cells(&self, report: &mut ConsistencyReport) {
        for r in MIN_RADIUS..=MAX_RADIUS {
            for n in r + 1..=MAX_LENGTH {
                let hist = self.history(r, n);
                let name = format!("cell M_{r}({n})");
                if hist.is_empty() {
                    report.push(name, false, "missing".into());
                    continue;
                }
                let same_lower = hist
                    .iter()
                    .all(|b| b.lower == hist[0].lower && b.lower_key == hist[0].lower_key);
                let ordered = hist.iter().all(|b| b.lower <= b.upper);
                report.push(
                    name,
                    same_lower && ordered,
                    format!("{} line(s), lower {}", hist.len(), hist[0].lower),
                );
            }
        }
    }

    /// `M_{n-1}(n) = 2^n - 1`, and the keys f / B occur only there.
    fn check_full_length_rows(&self, report: &mut ConsistencyReport) {
        for r in MIN_RADIUS..=MAX_RADIUS {
            let n = r + 1;
            let want = (1u64 << n) - 1;
            let ok = self.exact_value(r, n) == Some(want);
            report.push(format!("M_{r}({n}) = 2^{n} - 1"), ok, format!("expected {want}"));
        }
        for b in &self.records {
            if b.lower_key == "f" || b.upper_key == "B" {
                let want = (1u64 << b.n) - 1;
                let ok = b.n == b.r + 1
                    && (b.lower_key != "f" || b.lower == want)
                    && (b.upper_key != "B" || b.upper == want);
                report.push(
                    format!("key f/B on M_{}({})", b.r, b.n),
                    ok,
                    format!("value must be {want}"),
                );
            }
        }
        // the lower bound keyed "ℓ" is M_{n-r-1}(n) - 1
        for b in self.records.iter().filter(|b| b.lower_key == "ℓ") {
            let partner = b.n - b.r - 1;
            let ok = self
                .exact_value(partner, b.n)
                .is_some_and(|m| b.lower + 1 == m);
            report.push(
                format!("key ℓ on M_{}({})", b.r, b.n),
                ok,
                format!("lower must be M_{partner}({}) - 1", b.n),
            );
        }
    }

    /// `M_max(n) ≤ M_min(n) ≤ M_max(n) + 1` where `{min, max} = {r, n-r-1}`.
    fn check_symmetry(&self, report: &mut ConsistencyReport) {
        for n in 3..=MAX_LENGTH {
            for lo in MIN_RADIUS..=MAX_RADIUS {
                let Some(hi) = (n - 1).checked_sub(lo) else { continue };
                if hi <= lo || hi > MAX_RADIUS {
                    continue;
                }
                let (Ok(small), Ok(big)) = (self.lookup(lo, n), self.lookup(hi, n)) else {
                    continue;
                };
                // intervals must admit values with big ≤ small ≤ big + 1
                let ok = big.lower <= small.upper && small.lower <= big.upper + 1;
                report.push(
                    format!("symmetry at n={n}: M_{hi}({n}) <= M_{lo}({n}) <= M_{hi}({n}) + 1"),
                    ok,
                    format!("[{}, {}] vs [{}, {}]", small.lower, small.upper, big.lower, big.upper),
                );
            }
        }
    }

    /// `D_{2p+1}(n+1) = M_{2p+1}(n)`.
    fn check_transposition(&self, report: &mut ConsistencyReport) {
        for r in (MIN_RADIUS..=MAX_RADIUS).filter(|r| r % 2 == 1) {
            for n in r + 1..=MAX_LENGTH {
                let ok = match (self.lookup_discriminating(r, n + 1), self.lookup(r, n)) {
                    (Ok(d), Ok(m)) => d.lower == m.lower && d.upper == m.upper,
                    _ => false,
                };
                report.push(format!("D_{r}({}) = M_{r}({n})", n + 1), ok, String::new());
            }
        }
    }

    fn check_relation(&self, rel: &Relation, report: &mut ConsistencyReport) {
        let p = rel.n - rel.base_n;
        let mut problems = Vec::new();
        if rel.factor != 1u64 << p {
            problems.push(format!("factor {} is not 2^{p}", rel.factor));
        }
        if !self.has_upper(rel.r, rel.base_n, rel.base) {
            problems.push(format!("no upper bound {} for M_{}({})", rel.base, rel.r, rel.base_n));
        }
        let extra = match rel.extra {
            None => 0,
            Some((y, mult)) => {
                match mult {
                    Multiplier::Punctured => {}
                    Multiplier::Separating { k, size } => {
                        if let Err(e) = self.check_separating_size(p, k, size) {
                            problems.push(e);
                        }
                    }
                }
                y * mult.value(p)
            }
        };
        let total = rel.factor * rel.base + extra;
        if total != rel.value {
            problems.push(format!("{} * {} + {extra} = {total}, not {}", rel.factor, rel.base, rel.value));
        }
        let key = format!("({})", rel.label);
        let listed = self
            .history(rel.r, rel.n)
            .iter()
            .any(|b| b.upper_key == key && b.upper == rel.value);
        if !listed {
            problems.push(format!("table does not list {} {key} for M_{}({})", rel.value, rel.r, rel.n));
        }
        report.push(
            format!("({}) M_{}({}) <= {}", rel.label, rel.r, rel.n, rel.value),
            problems.is_empty(),
            problems.join("; "),
        );
    }

    /// An optimum k-separating code in F^p has size M_k(p) or M_k(p) - 1, and
    /// k-separating is the same as (p-k-1)-separating.
    fn check_separating_size(&self, p: u32, k: u32, size: u64) -> std::result::Result<(), String> {
        let mut brackets = 0;
        for radius in [k, p - k - 1] {
            if let Some(m) = self.exact_value(radius, p) {
                brackets += 1;
                if size + 1 != m && size != m {
                    return Err(format!("separating size {size} not in {{M_{radius}({p}) - 1, M_{radius}({p})}}"));
                }
            }
        }
        if brackets == 0 {
            return Err(format!("no exact M_{k}({p}) to bracket separating size {size}"));
        }
        Ok(())
    }

    /// Where `size` falls relative to the bounds for `(r, n)`.
    pub fn classify_size(&self, r: u32, n: u32, size: u64) -> Result<Classification> {
        let b = self.lookup(r, n)?;
        Ok(if size < b.lower {
            Classification::ViolatesLower
        } else if size < b.upper {
            Classification::BeatsUpper
        } else if size == b.upper {
            Classification::MatchesUpper
        } else {
            Classification::AboveUpper
        })
    }

    /// Verifies `code` and classifies its size.
    pub fn compare(&self, code: &Code, r: u32) -> Result<Classification> {
        let v = verify_identifying(code, r)?;
        if let Some(witness) = v.witness {
            return Err(Error::NotIdentifying { r, witness });
        }
        self.classify_size(r, code.dim(), code.len() as u64)
    }
}

pub fn lookup(r: u32, n: u32) -> Result<BoundRecord> {
    Registry::builtin().lookup(r, n)
}

pub fn check_consistency() -> ConsistencyReport {
    Registry::builtin().check_consistency()
}

pub fn compare(code: &Code, r: u32) -> Result<Classification> {
    Registry::builtin().compare(code, r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// Smaller than a proven lower bound: the code or the verifier is wrong.
    ViolatesLower,
    /// A new record: at least the lower bound, below the best known upper bound.
    BeatsUpper,
    MatchesUpper,
    AboveUpper,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::ViolatesLower => "violates-lower",
            Classification::BeatsUpper => "beats-upper",
            Classification::MatchesUpper => "matches-upper",
            Classification::AboveUpper => "above-upper",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConsistencyReport {
    pub checks: Vec<CheckOutcome>,
}

impl ConsistencyReport {
    fn push(&mut self, name: String, passed: bool, detail: String) {
        self.checks.push(CheckOutcome { name, passed, detail });
    }

    pub fn failures(&self) -> Vec<&CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn is_clean(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Copy, Debug)]
enum Multiplier {
    /// `|F^p \ {0^p}| = 2^p - 1` (construction C1).
    Punctured,
    /// A k-separating code of F^p of the given size (construction C2).
    Separating { k: u32, size: u64 },
}

impl Multiplier {
    fn value(self, p: u32) -> u64 {
        match self {
            Multiplier::Punctured => (1u64 << p) - 1,
            Multiplier::Separating { size, .. } => size,
        }
    }
}

/// `M_r(n) ≤ factor · base + y · multiplier = value`, from an (r, base_n)
/// code of size `base` extended by `p = n - base_n` coordinates.
#[derive(Clone, Copy, Debug)]
struct Relation {
    label: u32,
    r: u32,
    n: u32,
    base_n: u32,
    base: u64,
    factor: u64,
    extra: Option<(u64, Multiplier)>,
    value: u64,
}

const fn rel(label: u32, r: u32, n: u32, factor: u64, base_n: u32, base: u64, value: u64) -> Relation {
    Relation {
        label,
        r,
        n,
        base_n,
        base,
        factor,
        extra: None,
        value,
    }
}

#[allow(clippy::too_many_arguments)]
const fn rel_y(
    label: u32,
    r: u32,
    n: u32,
    factor: u64,
    base_n: u32,
    base: u64,
    y: u64,
    mult: Multiplier,
    value: u64,
) -> Relation {
    Relation {
        label,
        r,
        n,
        base_n,
        base,
        factor,
        extra: Some((y, mult)),
        value,
    }
}

use Multiplier::{Punctured, Separating};

const RELATIONS: &[Relation] = &[
    rel(1, 1, 21, 4, 19, 65536, 262144),
    rel(2, 2, 19, 8, 16, 1858, 14864),
    rel(2, 2, 20, 16, 16, 1858, 29728),
    rel(3, 2, 21, 32, 16, 1858, 59456),
    rel(4, 3, 18, 16, 14, 181, 2896),
    rel(4, 3, 19, 32, 14, 181, 5792),
    rel(5, 3, 20, 64, 14, 181, 11584),
    rel(5, 3, 21, 128, 14, 181, 23168),
    rel(6, 4, 19, 32, 14, 76, 2432),
    rel(6, 4, 20, 64, 14, 76, 4864),
    rel(7, 4, 21, 128, 14, 76, 9728),
    rel(8, 5, 19, 64, 13, 28, 1792),
    rel(8, 5, 20, 128, 13, 28, 3584),
    rel(9, 5, 21, 256, 13, 28, 7168),
    rel(10, 1, 14, 2, 13, 1322, 2644),
    rel_y(11, 1, 16, 2, 15, 4848, 128, Punctured, 9824),
    rel(12, 1, 20, 2, 19, 65536, 131072),
    rel_y(13, 2, 17, 2, 16, 1858, 151, Punctured, 3867),
    rel_y(14, 2, 18, 4, 16, 1858, 105, Punctured, 7747),
    rel_y(15, 3, 15, 2, 14, 181, 13, Punctured, 375),
    rel_y(16, 3, 16, 4, 14, 181, 4, Punctured, 736),
    rel(17, 3, 17, 8, 14, 181, 1448),
    rel_y(18, 4, 15, 2, 14, 76, 4, Punctured, 156),
    rel_y(19, 4, 16, 4, 14, 76, 2, Punctured, 310),
    rel_y(20, 4, 17, 8, 14, 76, 2, Separating { k: 1, size: 3 }, 614),
    rel_y(20, 4, 18, 16, 14, 76, 2, Separating { k: 1, size: 6 }, 1228),
    rel_y(21, 5, 14, 2, 13, 28, 4, Punctured, 60),
    rel_y(22, 5, 15, 4, 13, 28, 1, Punctured, 115),
    rel(23, 5, 16, 8, 13, 28, 224),
    rel(23, 5, 17, 16, 13, 28, 448),
    rel(23, 5, 18, 32, 13, 28, 896),
    rel(24, 2, 21, 2, 20, 29346, 58692),
    rel(25, 3, 20, 2, 19, 5532, 11064),
    rel(25, 3, 21, 4, 19, 5532, 22128),
    rel_y(26, 4, 19, 2, 18, 1045, 2, Punctured, 2092),
    rel(27, 4, 20, 4, 18, 1045, 4180),
    rel(27, 4, 21, 8, 18, 1045, 8360),
    rel_y(28, 5, 19, 2, 18, 454, 1, Punctured, 909),
    rel_y(29, 5, 20, 4, 18, 454, 1, Punctured, 1819),
    rel(30, 5, 21, 8, 18, 454, 3632),
];
