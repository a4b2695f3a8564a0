//! Per-vertex signatures `K(v) = C ∩ B_r(v)` and the evaluation `f = NC + NS`.
//!
//! Two independent paths live here:
//!
//! * [`evaluate`] / [`verify_identifying`] build everything from scratch with a
//!   sort-based grouping. This is the verification path and works for codes of
//!   any size up to [`MAX_TABLE_DIM`].
//! * [`SignatureTable`] keeps the signatures and the class counters live, so a
//!   single-codeword swap, insertion or removal can be priced by touching only
//!   the balls around the codewords involved.
//!
//! `NS` counts every unordered pair of vertices with equal signatures,
//! including pairs of uncovered vertices, so `f = 0` exactly when the code is
//! identifying.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use serde::Serialize;
use smallvec::SmallVec;

use crate::code::Code;
use crate::error::{Error, Result, Witness};
use crate::space::{check_radius, distance_words, Ball};

/// Largest dimension for which per-vertex tables are built.
pub const MAX_TABLE_DIM: u32 = 22;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    /// Vertices covered by no codeword.
    pub nc: u64,
    /// Unordered vertex pairs with identical signatures.
    pub ns: u64,
    pub f: u64,
}

impl Evaluation {
    pub fn new(nc: u64, ns: u64) -> Self {
        Self { nc, ns, f: nc + ns }
    }

    pub fn is_zero(&self) -> bool {
        self.f == 0
    }
}

/// Outcome of a from-scratch check, with a witness when the property fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub evaluation: Evaluation,
    pub witness: Option<Witness>,
}

impl Verification {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[inline]
fn pairs(count: i64) -> i64 {
    count * (count - 1) / 2
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-independent fingerprint contribution of one codeword index.
#[inline]
fn member_print(index: u32) -> u64 {
    mix64(u64::from(index).wrapping_add(0x9e37_79b9_7f4a_7c15))
}

fn check_table_dim(dim: u32) -> Result<()> {
    if dim > MAX_TABLE_DIM {
        Err(Error::TooLarge {
            dim,
            limit: MAX_TABLE_DIM,
        })
    } else {
        Ok(())
    }
}

/// Fingerprints are already mixed, so the map hashes them as-is.
#[derive(Default)]
struct PrintHasher(u64);

impl Hasher for PrintHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = mix64(self.0 ^ u64::from(b));
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = v;
    }
}

type PrintMap<V> = HashMap<u64, V, BuildHasherDefault<PrintHasher>>;

/// Sort-based from-scratch analysis over the vertices accepted by `keep`.
pub(crate) fn analyze(code: &Code, r: u32, keep: impl Fn(u32) -> bool) -> Result<Verification> {
    let dim = code.dim();
    check_radius(r, dim)?;
    check_table_dim(dim)?;
    let size = 1usize << dim;

    let mut offsets = vec![0usize; size + 1];
    for &c in code.words() {
        for v in Ball::new(c, dim, r) {
            offsets[v as usize + 1] += 1;
        }
    }
    for v in 0..size {
        offsets[v + 1] += offsets[v];
    }
    let mut fill = offsets.clone();
    let mut members = vec![0u32; offsets[size]];
    let mut prints = vec![0u64; size];
    for (i, &c) in code.words().iter().enumerate() {
        let p = member_print(i as u32);
        for v in Ball::new(c, dim, r) {
            let v = v as usize;
            members[fill[v]] = i as u32;
            fill[v] += 1;
            prints[v] = prints[v].wrapping_add(p);
        }
    }
    drop(fill);
    let list = |v: u32| &members[offsets[v as usize]..offsets[v as usize + 1]];

    let mut vertices: Vec<u32> = (0..size as u32).filter(|&v| keep(v)).collect();
    let nc_vertex = vertices.iter().copied().find(|&v| list(v).is_empty());
    let nc = vertices.iter().filter(|&&v| list(v).is_empty()).count() as u64;

    vertices.sort_unstable_by(|&a, &b| {
        prints[a as usize]
            .cmp(&prints[b as usize])
            .then_with(|| list(a).cmp(list(b)))
            .then(a.cmp(&b))
    });
    let mut ns = 0u64;
    let mut pair: Option<(u32, u32)> = None;
    let mut start = 0;
    while start < vertices.len() {
        let head = vertices[start];
        let mut end = start + 1;
        while end < vertices.len()
            && prints[vertices[end] as usize] == prints[head as usize]
            && list(vertices[end]) == list(head)
        {
            end += 1;
        }
        let run = (end - start) as u64;
        ns += run * (run - 1) / 2;
        if run > 1 {
            // runs are sorted by vertex, so this is the run's smallest pair
            let cand = (vertices[start], vertices[start + 1]);
            if pair.is_none_or(|p| cand < p) {
                pair = Some(cand);
            }
        }
        start = end;
    }

    let witness = match (nc_vertex, pair) {
        (Some(vertex), _) => Some(Witness::Uncovered { vertex }),
        (None, Some((first, second))) => Some(Witness::Unseparated { first, second }),
        (None, None) => None,
    };
    Ok(Verification {
        evaluation: Evaluation::new(nc, ns),
        witness,
    })
}

/// `(NC, NS, f)` of `code` at radius `r`, computed from scratch.
pub fn evaluate(code: &Code, r: u32) -> Result<Evaluation> {
    Ok(analyze(code, r, |_| true)?.evaluation)
}

/// Checks the r-identifying property and reports a witness on failure.
pub fn verify_identifying(code: &Code, r: u32) -> Result<Verification> {
    analyze(code, r, |_| true)
}

pub fn is_identifying(code: &Code, r: u32) -> Result<bool> {
    Ok(verify_identifying(code, r)?.holds())
}

type CoverSet = SmallVec<[u32; 4]>;

struct ClassEntry {
    members: Box<[u32]>,
    count: u64,
}

/// Multiset of signatures. Buckets are keyed by fingerprint; entries inside a
/// bucket are told apart by exact comparison, so collisions cost time only.
#[derive(Default)]
struct ClassCounts {
    map: PrintMap<SmallVec<[ClassEntry; 1]>>,
}

impl ClassCounts {
    fn count(&self, print: u64, set: &[u32]) -> u64 {
        self.map
            .get(&print)
            .and_then(|bucket| bucket.iter().find(|e| &*e.members == set))
            .map_or(0, |e| e.count)
    }

    /// Returns the count before the increment.
    fn increment(&mut self, print: u64, set: &[u32]) -> u64 {
        let bucket = self.map.entry(print).or_default();
        if let Some(e) = bucket.iter_mut().find(|e| &*e.members == set) {
            e.count += 1;
            return e.count - 1;
        }
        bucket.push(ClassEntry {
            members: set.into(),
            count: 1,
        });
        0
    }

    /// Returns the count before the decrement.
    fn decrement(&mut self, print: u64, set: &[u32]) -> u64 {
        let bucket = self
            .map
            .get_mut(&print)
            .expect("decrementing a signature class that is not present");
        let idx = bucket
            .iter()
            .position(|e| &*e.members == set)
            .expect("decrementing a signature class that is not present");
        let old = bucket[idx].count;
        if old == 1 {
            bucket.swap_remove(idx);
            if bucket.is_empty() {
                self.map.remove(&print);
            }
        } else {
            bucket[idx].count -= 1;
        }
        old
    }

    fn classes(&self) -> usize {
        self.map.values().map(|b| b.len()).sum()
    }

    fn total(&self) -> u64 {
        self.map.values().flatten().map(|e| e.count).sum()
    }
}

struct OverlayEntry {
    print: u64,
    start: u32,
    len: u32,
    delta: i64,
    next: u32,
}

const NO_ENTRY: u32 = u32::MAX;

/// Reusable scratch space for pricing moves without touching the table.
#[derive(Default)]
pub struct DeltaScratch {
    arena: Vec<u32>,
    entries: Vec<OverlayEntry>,
    heads: PrintMap<u32>,
    buf: Vec<u32>,
}

impl DeltaScratch {
    pub fn new() -> Self {
        Self::default()
    }

    fn clear(&mut self) {
        self.arena.clear();
        self.entries.clear();
        self.heads.clear();
    }

    fn bump(&mut self, print: u64, set: &[u32], delta: i64) {
        let head = self.heads.get(&print).copied().unwrap_or(NO_ENTRY);
        let mut at = head;
        while at != NO_ENTRY {
            let e = &mut self.entries[at as usize];
            let start = e.start as usize;
            if &self.arena[start..start + e.len as usize] == set {
                e.delta += delta;
                return;
            }
            at = e.next;
        }
        let start = self.arena.len() as u32;
        self.arena.extend_from_slice(set);
        self.entries.push(OverlayEntry {
            print,
            start,
            len: set.len() as u32,
            delta,
            next: head,
        });
        self.heads.insert(print, self.entries.len() as u32 - 1);
    }

    /// Records that `vertex` moves from signature `old` to `old` minus or plus `member`.
    fn record_move(&mut self, old_print: u64, old: &[u32], member: u32, adding: bool) {
        self.bump(old_print, old, -1);
        let mut buf = std::mem::take(&mut self.buf);
        buf.clear();
        let new_print = if adding {
            let at = old.partition_point(|&x| x < member);
            buf.extend_from_slice(&old[..at]);
            buf.push(member);
            buf.extend_from_slice(&old[at..]);
            old_print.wrapping_add(member_print(member))
        } else {
            buf.extend(old.iter().copied().filter(|&x| x != member));
            old_print.wrapping_sub(member_print(member))
        };
        self.bump(new_print, &buf, 1);
        self.buf = buf;
    }
}

const VACANT: u32 = u32::MAX;

/// Live signatures of every vertex of F^n under a code, with the class
/// counters needed to keep `NC` and `NS` current.
///
/// Codewords live in numbered slots; a slot id is the "codeword index" of the
/// signature sets. Removing a codeword frees its slot without renumbering the
/// others, and a swap puts the new word in the old word's slot.
pub struct SignatureTable {
    dim: u32,
    radius: u32,
    slots: Vec<u32>,
    free: Vec<u32>,
    live: usize,
    slot_of: Vec<u32>,
    covers: Vec<CoverSet>,
    prints: Vec<u64>,
    classes: ClassCounts,
    nc: u64,
    ns: u64,
}

impl SignatureTable {
    /// A table for the empty code: every vertex uncovered, one big class.
    pub fn empty(dim: u32, radius: u32) -> Result<Self> {
        crate::space::check_dim(dim)?;
        check_table_dim(dim)?;
        check_radius(radius, dim)?;
        let size = 1usize << dim;
        let mut classes = ClassCounts::default();
        let mut ns = 0u64;
        for _ in 0..size {
            ns += classes.increment(0, &[]);
        }
        Ok(Self {
            dim,
            radius,
            slots: Vec::new(),
            free: Vec::new(),
            live: 0,
            slot_of: vec![VACANT; size],
            covers: vec![CoverSet::new(); size],
            prints: vec![0; size],
            classes,
            nc: size as u64,
            ns,
        })
    }

    /// Scatters every codeword over its ball; codeword `i` of `code` gets slot `i`.
    pub fn build(code: &Code, radius: u32) -> Result<Self> {
        let dim = code.dim();
        check_table_dim(dim)?;
        check_radius(radius, dim)?;
        let size = 1usize << dim;
        let mut slot_of = vec![VACANT; size];
        let mut covers = vec![CoverSet::new(); size];
        let mut prints = vec![0u64; size];
        for (i, &w) in code.words().iter().enumerate() {
            slot_of[w as usize] = i as u32;
            let p = member_print(i as u32);
            for v in Ball::new(w, dim, radius) {
                covers[v as usize].push(i as u32);
                prints[v as usize] = prints[v as usize].wrapping_add(p);
            }
        }
        let mut classes = ClassCounts::default();
        let mut ns = 0;
        for v in 0..size {
            ns += classes.increment(prints[v], &covers[v]);
        }
        let nc = classes.count(0, &[]);
        Ok(Self {
            dim,
            radius,
            slots: code.words().to_vec(),
            free: Vec::new(),
            live: code.len(),
            slot_of,
            covers,
            prints,
            classes,
            nc,
            ns,
        })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Number of codewords.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn evaluation(&self) -> Evaluation {
        Evaluation::new(self.nc, self.ns)
    }

    /// Upper bound (exclusive) on slot ids in use.
    pub fn slot_capacity(&self) -> u32 {
        self.slots.len() as u32
    }

    /// Word held in `slot`, if any.
    pub fn word_at(&self, slot: u32) -> Option<u32> {
        self.slots.get(slot as usize).copied().filter(|&w| w != VACANT)
    }

    pub fn slot_of(&self, word: u32) -> Option<u32> {
        self.slot_of.get(word as usize).copied().filter(|&s| s != VACANT)
    }

    pub fn is_codeword(&self, word: u32) -> bool {
        self.slot_of(word).is_some()
    }

    /// Occupied slots with their words, in slot order.
    pub fn codewords(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != VACANT)
            .map(|(i, &w)| (i as u32, w))
    }

    pub fn code(&self) -> Code {
        Code::new(self.dim, self.codewords().map(|(_, w)| w)).expect("table holds a valid code")
    }

    /// Slot ids of the codewords covering `vertex`, sorted.
    pub fn cover_set(&self, vertex: u32) -> &[u32] {
        &self.covers[vertex as usize]
    }

    /// Number of vertices sharing the signature of `vertex` (itself included).
    pub fn class_size(&self, vertex: u32) -> u64 {
        let v = vertex as usize;
        self.classes.count(self.prints[v], &self.covers[v])
    }

    /// Number of distinct signatures.
    pub fn class_count(&self) -> usize {
        self.classes.classes()
    }

    fn check_slot(&self, slot: u32) -> Result<u32> {
        self.word_at(slot).ok_or(Error::InvalidSlot(slot))
    }

    fn check_new_word(&self, word: u32) -> Result<()> {
        if word as usize >= self.slot_of.len() {
            return Err(Error::WordOutOfRange {
                word: u64::from(word),
                dim: self.dim,
            });
        }
        if self.slot_of[word as usize] != VACANT {
            return Err(Error::AlreadyCodeword(word));
        }
        Ok(())
    }

    fn next_slot(&self) -> u32 {
        self.free.last().copied().unwrap_or(self.slots.len() as u32)
    }

    /// Core pricing routine. `remove` and `add` are (slot, word) moves; when
    /// both are present they share a slot and vertices in both balls keep
    /// their signature unchanged.
    fn price(&self, scratch: &mut DeltaScratch, remove: Option<(u32, u32)>, add: Option<(u32, u32)>) -> i64 {
        scratch.clear();
        let r = self.radius;
        if let Some((slot, word)) = remove {
            for v in Ball::new(word, self.dim, r) {
                if let Some((_, a)) = add {
                    if distance_words(v, a) <= r {
                        continue;
                    }
                }
                let v = v as usize;
                scratch.record_move(self.prints[v], &self.covers[v], slot, false);
            }
        }
        if let Some((slot, word)) = add {
            for v in Ball::new(word, self.dim, r) {
                if let Some((_, old)) = remove {
                    if distance_words(v, old) <= r {
                        continue;
                    }
                }
                let v = v as usize;
                scratch.record_move(self.prints[v], &self.covers[v], slot, true);
            }
        }
        let mut delta = 0i64;
        for e in &scratch.entries {
            if e.delta == 0 {
                continue;
            }
            let start = e.start as usize;
            let set = &scratch.arena[start..start + e.len as usize];
            let base = self.classes.count(e.print, set) as i64;
            delta += pairs(base + e.delta) - pairs(base);
            if set.is_empty() {
                delta += e.delta;
            }
        }
        delta
    }

    fn move_vertex(&mut self, v: usize, member: u32, adding: bool) {
        let old = self.classes.decrement(self.prints[v], &self.covers[v]);
        self.ns -= old - 1;
        if self.covers[v].is_empty() {
            self.nc -= 1;
        }
        let cover = &mut self.covers[v];
        if adding {
            let at = cover.partition_point(|&x| x < member);
            cover.insert(at, member);
            self.prints[v] = self.prints[v].wrapping_add(member_print(member));
        } else {
            let at = cover
                .iter()
                .position(|&x| x == member)
                .expect("vertex is covered by the removed codeword");
            cover.remove(at);
            self.prints[v] = self.prints[v].wrapping_sub(member_print(member));
        }
        if self.covers[v].is_empty() {
            self.nc += 1;
        }
        self.ns += self.classes.increment(self.prints[v], &self.covers[v]);
    }

    /// `f(C \ {C[slot]} ∪ {word}) − f(C)`, leaving the table untouched.
    pub fn swap_delta(&self, slot: u32, word: u32) -> Result<i64> {
        self.swap_delta_with(&mut DeltaScratch::new(), slot, word)
    }

    pub fn swap_delta_with(&self, scratch: &mut DeltaScratch, slot: u32, word: u32) -> Result<i64> {
        let old = self.check_slot(slot)?;
        self.check_new_word(word)?;
        Ok(self.price(scratch, Some((slot, old)), Some((slot, word))))
    }

    /// `f(C ∪ {word}) − f(C)`.
    pub fn insert_delta_with(&self, scratch: &mut DeltaScratch, word: u32) -> Result<i64> {
        self.check_new_word(word)?;
        Ok(self.price(scratch, None, Some((self.next_slot(), word))))
    }

    /// `f(C \ {C[slot]}) − f(C)`.
    pub fn remove_delta_with(&self, scratch: &mut DeltaScratch, slot: u32) -> Result<i64> {
        let old = self.check_slot(slot)?;
        Ok(self.price(scratch, Some((slot, old)), None))
    }

    /// Replaces the codeword in `slot` by `word`; the new word keeps the slot.
    pub fn apply_swap(&mut self, slot: u32, word: u32) -> Result<Evaluation> {
        let old = self.check_slot(slot)?;
        self.check_new_word(word)?;
        let (dim, r) = (self.dim, self.radius);
        for v in Ball::new(old, dim, r) {
            if distance_words(v, word) > r {
                self.move_vertex(v as usize, slot, false);
            }
        }
        for v in Ball::new(word, dim, r) {
            if distance_words(v, old) > r {
                self.move_vertex(v as usize, slot, true);
            }
        }
        self.slots[slot as usize] = word;
        self.slot_of[old as usize] = VACANT;
        self.slot_of[word as usize] = slot;
        Ok(self.evaluation())
    }

    /// Adds `word` as a codeword and returns its slot.
    pub fn insert(&mut self, word: u32) -> Result<u32> {
        self.check_new_word(word)?;
        let slot = match self.free.pop() {
            Some(s) => s,
            None => {
                self.slots.push(VACANT);
                self.slots.len() as u32 - 1
            }
        };
        for v in Ball::new(word, self.dim, self.radius) {
            self.move_vertex(v as usize, slot, true);
        }
        self.slots[slot as usize] = word;
        self.slot_of[word as usize] = slot;
        self.live += 1;
        Ok(slot)
    }

    /// Removes the codeword in `slot` and returns it.
    pub fn remove(&mut self, slot: u32) -> Result<u32> {
        let word = self.check_slot(slot)?;
        for v in Ball::new(word, self.dim, self.radius) {
            self.move_vertex(v as usize, slot, false);
        }
        self.slots[slot as usize] = VACANT;
        self.slot_of[word as usize] = VACANT;
        self.free.push(slot);
        self.live -= 1;
        Ok(word)
    }

    /// Recomputes every signature and counter and compares with the live
    /// state. Meant for tests; cost is a full rebuild.
    pub fn audit(&self) -> Result<(), String> {
        let size = 1u32 << self.dim;
        let mut fresh = ClassCounts::default();
        let mut ns = 0;
        for v in 0..size {
            let mut want: Vec<u32> = Ball::new(v, self.dim, self.radius)
                .filter_map(|u| self.slot_of(u))
                .collect();
            want.sort_unstable();
            let have = &self.covers[v as usize];
            if have.as_slice() != want.as_slice() {
                return Err(format!("vertex {v}: cover set {have:?}, expected {want:?}"));
            }
            let print = want
                .iter()
                .fold(0u64, |acc, &m| acc.wrapping_add(member_print(m)));
            if print != self.prints[v as usize] {
                return Err(format!("vertex {v}: stale fingerprint"));
            }
            ns += fresh.increment(print, &want);
        }
        let nc = fresh.count(0, &[]);
        if self.classes.total() != u64::from(size) {
            return Err(format!("class counts sum to {}, not {size}", self.classes.total()));
        }
        if fresh.classes() != self.classes.classes() {
            return Err("class multiset differs from a rebuild".into());
        }
        for bucket in self.classes.map.values() {
            for e in bucket {
                let print = e
                    .members
                    .iter()
                    .fold(0u64, |acc, &m| acc.wrapping_add(member_print(m)));
                if fresh.count(print, &e.members) != e.count {
                    return Err(format!("class {:?} has a stale count", e.members));
                }
            }
        }
        if (nc, ns) != (self.nc, self.ns) {
            return Err(format!(
                "counters (nc={}, ns={}) but rebuild gives (nc={nc}, ns={ns})",
                self.nc, self.ns
            ));
        }
        let live = self.slots.iter().filter(|&&w| w != VACANT).count();
        if live != self.live {
            return Err("live codeword count is stale".into());
        }
        Ok(())
    }
}
