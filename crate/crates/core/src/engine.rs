//! Exhaustive search for the weighted zero-sum constants.
//!
//! For every constant handled here, a sequence "fails" when it lacks the
//! required weighted zero-subsum, and failing sequences are closed under
//! taking subsequences. The constant is therefore one more than the maximal
//! failing length, and a depth-first search that only ever extends failing
//! sequences visits exactly the failing family.
//!
//! The search forks at the first term; each branch runs with its own DP
//! scratch and the branch results are merged by (length, colex) so that the
//! value, witness and node count do not depend on the thread count.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::automorphism::{self, colex_less};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::sequence::{self, length_sum_table, weighted_images, Sequence, WeightSet};

/// Which constant a search computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantKind {
    /// `D_W`: a nonempty weighted zero-subsum of any length.
    Davenport,
    /// `eta_W`: a nonempty weighted zero-subsum of length at most `exp(G)`.
    Eta,
    /// `s_W`: a weighted zero-subsum of length exactly `exp(G)`.
    Egz,
    /// `g_W`: as `s_W`, over squarefree sequences only.
    Harborth,
    /// `cr`: 0-free subsets whose nonempty subset sums cover the group.
    Critical,
}

impl ConstantKind {
    pub const ALL: [ConstantKind; 5] = [Self::Davenport, Self::Eta, Self::Egz, Self::Harborth, Self::Critical];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Davenport => "davenport",
            Self::Eta => "eta",
            Self::Egz => "egz",
            Self::Harborth => "harborth",
            Self::Critical => "critical",
        }
    }

    /// The search space the definition quantifies over.
    pub fn default_mode(&self) -> SearchMode {
        match self {
            Self::Harborth | Self::Critical => SearchMode::Squarefree,
            _ => SearchMode::Multiset,
        }
    }

    fn rows(&self, exponent: usize) -> usize {
        match self {
            Self::Davenport | Self::Critical => 1,
            _ => exponent + 1,
        }
    }
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown constant kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Squarefree,
    Multiset,
}

pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000_000;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub threads: usize,
    pub node_budget: u64,
    pub orbit_pruning: bool,
    /// Multiplicity cap for multiset searches; `None` means the length cap.
    pub max_multiplicity: Option<usize>,
    /// Answer trivial weight sets from their closed form instead of searching.
    pub short_circuit_trivial: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            threads: 1,
            node_budget: DEFAULT_NODE_BUDGET,
            orbit_pruning: false,
            max_multiplicity: None,
            short_circuit_trivial: true,
        }
    }
}

/// Result of one constant computation.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub kind: ConstantKind,
    pub group: GroupSpec,
    pub weights: WeightSet,
    pub value: usize,
    /// A failing sequence of length `value - 1`.
    pub witness: Option<Sequence>,
    pub nodes_visited: u64,
    pub wall_time: Duration,
}

/// JSON form of a [`SearchReport`].
#[derive(Debug, Clone, Serialize)]
pub struct SearchReportJson {
    pub kind: ConstantKind,
    pub group: String,
    pub weights: Vec<u32>,
    pub value: usize,
    pub witness: Option<String>,
    pub nodes_visited: u64,
    pub wall_time_ms: u64,
}

impl SearchReport {
    /// Builds a report, re-checking that the witness has length `value - 1`
    /// and fails the property.
    pub fn new(
        kind: ConstantKind,
        group: GroupSpec,
        weights: WeightSet,
        value: usize,
        witness: Option<Sequence>,
        nodes_visited: u64,
        wall_time: Duration,
    ) -> Result<Self> {
        if let Some(w) = &witness {
            if w.len() + 1 != value {
                return Err(Error::InvalidWitness(format!("length {} but value {value}", w.len())));
            }
            if !witness_fails(kind, &weights, w)? {
                return Err(Error::InvalidWitness(format!("{w} has the required zero-subsum")));
            }
        }
        Ok(Self { kind, group, weights, value, witness, nodes_visited, wall_time })
    }

    /// Serializable view; `timing = false` zeroes the wall time so reports are
    /// byte-comparable across runs.
    pub fn to_json(&self, timing: bool) -> SearchReportJson {
        SearchReportJson {
            kind: self.kind,
            group: self.group.to_string(),
            weights: self.weights.classes().to_vec(),
            value: self.value,
            witness: self.witness.as_ref().map(ToString::to_string),
            nodes_visited: self.nodes_visited,
            wall_time_ms: if timing { self.wall_time.as_millis() as u64 } else { 0 },
        }
    }
}

/// Whether `s` lacks the zero-subsum required by `kind`, checked through the
/// public subsum routines rather than the search kernel.
pub fn witness_fails(kind: ConstantKind, weights: &WeightSet, s: &Sequence) -> Result<bool> {
    let g = s.group();
    let exp = g.exponent() as usize;
    Ok(match kind {
        ConstantKind::Harborth => s.is_squarefree() && !sequence::has_weighted_zero_of_length(s, weights, exp)?,
        ConstantKind::Egz => !sequence::has_weighted_zero_of_length(s, weights, exp)?,
        ConstantKind::Eta => {
            let t = length_sum_table(s, weights, exp)?;
            (1..=exp).all(|l| !t.has_zero(l))
        }
        ConstantKind::Davenport => {
            let t = length_sum_table(s, weights, s.len())?;
            (1..=s.len()).all(|l| !t.has_zero(l))
        }
        ConstantKind::Critical => {
            let one = WeightSet::classic(g.exponent());
            let t = length_sum_table(s, &one, s.len())?;
            let covered = (1..=s.len()).fold(0u64, |acc, l| acc | t.row(l).bits());
            s.is_squarefree() && s.multiplicities()[0] == 0 && covered != g.full_mask()
        }
    })
}

/// Largest failing length together with the colex-least witness of that length.
#[derive(Debug, Clone)]
pub struct FailingSearch {
    pub length: usize,
    pub witness: Sequence,
    pub nodes_visited: u64,
}

/// Owns the thread pool and options for a batch of searches.
pub struct Engine {
    opts: SearchOptions,
    pool: rayon::ThreadPool,
}

impl Engine {
    pub fn new(opts: SearchOptions) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads.max(1))
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?;
        Ok(Self { opts, pool })
    }

    pub fn options(&self) -> &SearchOptions {
        &self.opts
    }

    pub fn harborth(&self, group: &GroupSpec, weights: &WeightSet) -> Result<SearchReport> {
        self.compute(ConstantKind::Harborth, group, weights)
    }

    pub fn egz(&self, group: &GroupSpec, weights: &WeightSet) -> Result<SearchReport> {
        self.compute(ConstantKind::Egz, group, weights)
    }

    pub fn davenport(&self, group: &GroupSpec, weights: &WeightSet) -> Result<SearchReport> {
        self.compute(ConstantKind::Davenport, group, weights)
    }

    pub fn eta(&self, group: &GroupSpec, weights: &WeightSet) -> Result<SearchReport> {
        self.compute(ConstantKind::Eta, group, weights)
    }

    pub fn critical_number(&self, group: &GroupSpec) -> Result<SearchReport> {
        self.compute(ConstantKind::Critical, group, &WeightSet::classic(group.exponent()))
    }

    /// Computes `kind` for `(group, weights)`; `weights` is ignored for the
    /// critical number.
    pub fn compute(&self, kind: ConstantKind, group: &GroupSpec, weights: &WeightSet) -> Result<SearchReport> {
        let start = Instant::now();
        let weights = if kind == ConstantKind::Critical {
            WeightSet::classic(group.exponent())
        } else {
            weights.check_group(group)?;
            weights.clone()
        };
        if kind == ConstantKind::Critical && group.order() < 3 {
            return Err(Error::Precondition(format!("critical number needs |G| >= 3, got {}", group.order())));
        }
        let exp = group.exponent() as usize;
        let (value, witness, nodes) = if weights.is_trivial() && self.opts.short_circuit_trivial && kind != ConstantKind::Critical {
            let (value, witness) = trivial_answer(kind, group);
            (value, witness, 0)
        } else {
            let found = self.max_failing_length(group, &weights, kind, kind.default_mode())?;
            (found.length + 1, found.witness, found.nodes_visited)
        };
        let report = SearchReport::new(kind, group.clone(), weights, value, Some(witness), nodes, start.elapsed())?;
        check_bounds(&report, exp)?;
        Ok(report)
    }

    /// The largest length of a failing sequence, with the colex-least failing
    /// sequence of that length.
    pub fn max_failing_length(
        &self,
        group: &GroupSpec,
        weights: &WeightSet,
        kind: ConstantKind,
        mode: SearchMode,
    ) -> Result<FailingSearch> {
        weights.check_group(group)?;
        let weights = if kind == ConstantKind::Critical { WeightSet::classic(group.exponent()) } else { weights.clone() };
        let candidates: Vec<usize> = match kind {
            ConstantKind::Critical => (1..group.order()).collect(),
            _ => (0..group.order()).collect(),
        };
        let perms = if self.opts.orbit_pruning { Some(automorphism::automorphisms(group)?) } else { None };
        let exp = group.exponent() as usize;
        let log2 = usize::BITS as usize - 1 - group.order().leading_zeros() as usize;
        let mut cap = match mode {
            SearchMode::Squarefree => candidates.len(),
            SearchMode::Multiset => exp + log2 + 4,
        };
        let mut total_nodes = 0u64;
        loop {
            let mult_cap = match mode {
                SearchMode::Squarefree => 1,
                SearchMode::Multiset => self.opts.max_multiplicity.unwrap_or(cap).min(cap),
            };
            let hard_cap = cap.min(mult_cap * candidates.len());
            let search = Search {
                group,
                kind,
                images: (0..group.order()).map(|g| weighted_images(group, &weights, g)).collect(),
                rows: kind.rows(exp),
                exp,
                cap: hard_cap,
                mult_cap,
                skip_repeats: matches!(kind, ConstantKind::Davenport | ConstantKind::Eta)
                    && weights.has_opposite_pair()
                    && exp >= 2,
                perms: perms.as_deref(),
                collect: false,
                budget: self.opts.node_budget.saturating_sub(total_nodes),
                spent: AtomicU64::new(0),
                abort: AtomicBool::new(false),
            };
            let outcome = self.pool.install(|| search.run(&candidates));
            let nodes = search.spent.load(Ordering::Relaxed);
            total_nodes += nodes;
            if search.abort.load(Ordering::Relaxed) || total_nodes > self.opts.node_budget {
                return Err(Error::BudgetExceeded { budget: self.opts.node_budget });
            }
            if outcome.hit_cap && hard_cap == cap && mode == SearchMode::Multiset {
                cap *= 2;
                continue;
            }
            let witness = Sequence::from_indices(group, &outcome.best)?;
            return Ok(FailingSearch { length: outcome.best.len(), witness, nodes_visited: total_nodes });
        }
    }
}

impl Engine {
    /// Every failing squarefree sequence of exactly `length` terms, as sorted
    /// index lists in colex order, with the number of nodes visited.
    pub fn failing_squarefree_of_length(
        &self,
        group: &GroupSpec,
        weights: &WeightSet,
        kind: ConstantKind,
        length: usize,
    ) -> Result<(Vec<Vec<usize>>, u64)> {
        weights.check_group(group)?;
        let candidates: Vec<usize> = match kind {
            ConstantKind::Critical => (1..group.order()).collect(),
            _ => (0..group.order()).collect(),
        };
        if length == 0 {
            return Ok((vec![Vec::new()], 0));
        }
        if length > candidates.len() {
            return Ok((Vec::new(), 0));
        }
        let exp = group.exponent() as usize;
        let search = Search {
            group,
            kind,
            images: (0..group.order()).map(|g| weighted_images(group, weights, g)).collect(),
            rows: kind.rows(exp),
            exp,
            cap: length,
            mult_cap: 1,
            skip_repeats: false,
            perms: None,
            collect: true,
            budget: self.opts.node_budget,
            spent: AtomicU64::new(0),
            abort: AtomicBool::new(false),
        };
        let outcome = self.pool.install(|| search.run(&candidates));
        let nodes = search.spent.load(Ordering::Relaxed);
        if search.abort.load(Ordering::Relaxed) || nodes > self.opts.node_budget {
            return Err(Error::BudgetExceeded { budget: self.opts.node_budget });
        }
        let mut found = outcome.found;
        found.sort_unstable_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        Ok((found, nodes))
    }

    /// Runs `f` inside this engine's thread pool.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

fn trivial_answer(kind: ConstantKind, group: &GroupSpec) -> (usize, Sequence) {
    let exp = group.exponent() as usize;
    match kind {
        ConstantKind::Davenport | ConstantKind::Eta => (1, Sequence::empty(group)),
        ConstantKind::Egz => (exp, Sequence::from_indices(group, &vec![0; exp - 1]).expect("index 0")),
        _ => (exp, Sequence::from_indices(group, &(0..exp - 1).collect::<Vec<_>>()).expect("in range")),
    }
}

fn check_bounds(r: &SearchReport, exp: usize) -> Result<()> {
    let order = r.group.order();
    let ok = match r.kind {
        ConstantKind::Harborth => exp <= r.value && r.value <= order + 1,
        ConstantKind::Egz => exp <= r.value,
        ConstantKind::Davenport | ConstantKind::Eta => r.value >= 1,
        ConstantKind::Critical => r.value >= 1 && r.value <= order,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::BoundViolation(format!("{} value {} for {}", r.kind, r.value, r.group)))
    }
}

struct Search<'a> {
    group: &'a GroupSpec,
    kind: ConstantKind,
    images: Vec<Vec<usize>>,
    rows: usize,
    exp: usize,
    cap: usize,
    mult_cap: usize,
    skip_repeats: bool,
    perms: Option<&'a [Vec<u8>]>,
    collect: bool,
    budget: u64,
    spent: AtomicU64,
    abort: AtomicBool,
}

#[derive(Debug, Default)]
struct Outcome {
    best: Vec<usize>,
    hit_cap: bool,
    found: Vec<Vec<usize>>,
}

impl Outcome {
    fn offer(&mut self, seq: &[usize]) {
        if seq.len() > self.best.len() || (seq.len() == self.best.len() && colex_less(seq, &self.best)) {
            self.best.clear();
            self.best.extend_from_slice(seq);
        }
    }

    fn merge(mut self, other: Outcome) -> Outcome {
        self.offer(&other.best);
        self.hit_cap |= other.hit_cap;
        self.found.extend(other.found);
        self
    }
}

/// One branch of the search: a seeded prefix and the elements it may append.
struct Branch {
    seed: usize,
    allowed: Vec<usize>,
}

struct Worker<'s, 'a> {
    search: &'s Search<'a>,
    allowed: Vec<usize>,
    scratch: Vec<u64>,
    seq: Vec<usize>,
    counts: Vec<usize>,
    local: u64,
    out: Outcome,
    sorted: Vec<usize>,
}

const FLUSH: u64 = 1 << 12;

impl<'a> Search<'a> {
    fn run(&self, candidates: &[usize]) -> Outcome {
        let branches: Vec<Branch> = match self.perms {
            None => candidates
                .iter()
                .enumerate()
                .map(|(pos, &c)| Branch { seed: c, allowed: candidates[pos..].to_vec() })
                .collect(),
            Some(perms) => {
                // every failing sequence is equivalent to one containing the
                // representative of the first orbit it meets
                let orbits = automorphism::orbits(perms, candidates);
                (0..orbits.len())
                    .map(|j| {
                        let mut allowed: Vec<usize> = orbits[j..].iter().flatten().copied().collect();
                        allowed.sort_unstable();
                        Branch { seed: orbits[j][0], allowed }
                    })
                    .collect()
            }
        };
        let mut root = Outcome::default();
        root.offer(&[]);
        branches
            .par_iter()
            .map(|b| self.run_branch(b))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(root, Outcome::merge)
    }

    fn run_branch(&self, branch: &Branch) -> Outcome {
        let depth = self.cap + 1;
        let mut w = Worker {
            search: self,
            allowed: branch.allowed.clone(),
            scratch: vec![0u64; (depth + 1) * self.rows],
            seq: Vec::with_capacity(depth),
            counts: vec![0; self.group.order()],
            local: 0,
            out: Outcome::default(),
            sorted: Vec::with_capacity(depth),
        };
        if self.cap == 0 {
            return w.out;
        }
        if self.rows > 1 {
            w.scratch[0] = 1;
        }
        if w.push(branch.seed) {
            // unpruned squarefree branches list the seed first
            let from = if self.perms.is_none() && self.mult_cap == 1 { 1 } else { 0 };
            w.dfs(from);
        }
        w.flush();
        w.out
    }

    fn step(&self, parent: &[u64], g: usize, child: &mut [u64]) {
        let images = &self.images[g];
        match self.kind {
            ConstantKind::Davenport | ConstantKind::Critical => {
                let p = parent[0];
                let mut acc = p;
                for &t in images {
                    acc |= self.group.translate(p, t) | 1 << t;
                }
                child[0] = acc;
            }
            _ => sequence::extend_rows(self.group, parent, images, child),
        }
    }

    fn fails(&self, rows: &[u64]) -> bool {
        match self.kind {
            ConstantKind::Harborth | ConstantKind::Egz => rows[self.exp] & 1 == 0,
            ConstantKind::Eta => rows[1..=self.exp].iter().all(|r| r & 1 == 0),
            ConstantKind::Davenport => rows[0] & 1 == 0,
            ConstantKind::Critical => rows[0] != self.group.full_mask(),
        }
    }
}

impl Worker<'_, '_> {
    /// Appends `g` if the result still fails; returns whether it did.
    fn push(&mut self, g: usize) -> bool {
        let s = self.search;
        if self.counts[g] >= s.mult_cap || (s.skip_repeats && self.counts[g] > 0) {
            return false;
        }
        let r = s.rows;
        let d = self.seq.len();
        let (head, tail) = self.scratch.split_at_mut((d + 1) * r);
        let child = &mut tail[..r];
        s.step(&head[d * r..], g, child);
        let failing = s.fails(child);
        self.local += 1;
        if self.local >= FLUSH {
            self.flush();
        }
        if !failing {
            return false;
        }
        self.seq.push(g);
        self.counts[g] += 1;
        self.record();
        true
    }

    fn pop(&mut self) {
        let g = self.seq.pop().expect("nonempty");
        self.counts[g] -= 1;
    }

    fn record(&mut self) {
        let s = self.search;
        if self.seq.len() >= s.cap {
            self.out.hit_cap = true;
            if s.collect {
                let mut found = self.seq.clone();
                found.sort_unstable();
                self.out.found.push(found);
            }
        }
        if self.seq.len() < self.out.best.len() {
            return;
        }
        self.sorted.clear();
        self.sorted.extend_from_slice(&self.seq);
        self.sorted.sort_unstable();
        match s.perms {
            None => self.out.offer(&self.sorted),
            Some(perms) => {
                let canon = automorphism::canonical_image(perms, &self.sorted);
                self.out.offer(&canon);
            }
        }
    }

    fn dfs(&mut self, from: usize) {
        if self.seq.len() >= self.search.cap || self.search.abort.load(Ordering::Relaxed) {
            return;
        }
        let squarefree = self.search.mult_cap == 1;
        for pos in from..self.allowed.len() {
            let g = self.allowed[pos];
            if self.push(g) {
                self.dfs(if squarefree { pos + 1 } else { pos });
                self.pop();
            }
        }
    }

    fn flush(&mut self) {
        let s = self.search;
        let total = s.spent.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if total > s.budget {
            s.abort.store(true, Ordering::Relaxed);
        }
    }
}
