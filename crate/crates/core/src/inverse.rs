//! Extremal censuses for the Harborth-type inverse problems and the
//! structural predicates they are checked against.
//!
//! A census lists every squarefree sequence of length `g_W(G) - 1` without a
//! weighted zero-subsum of length `exp(G)`. Each predicate below is evaluated
//! over all squarefree sequences of that length, and the two sets must agree.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::automorphism;
use crate::engine::{witness_fails, ConstantKind, Engine};
use crate::error::{Error, Result};
use crate::formulas::gw_equals_order_plus_one;
use crate::group::{enumerate_bases_2x2n, Basis2x2n, GroupSpec};
use crate::sequence::{enumerate_squarefree, subsums_sigma0, Sequence, WeightSet};

/// The characterizations that can be checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TheoremId {
    /// Extremal plus-minus sets of `C2 + C4`.
    C2c4Pm,
    /// Extremal plus-minus sets of `C2 + C2n`, `n >= 3`.
    PmGeneral,
    /// Extremal sets of `C2 + C2n` without weights, `n` even.
    UnweightedEven,
    /// Extremal sets of `C2 + C2n` without weights, `n` odd.
    UnweightedOdd,
    /// The whole group is the only extremal set when `g_W(G) = |G| + 1`.
    FullGroupRemark,
}

impl TheoremId {
    pub const ALL: [TheoremId; 5] = [
        TheoremId::C2c4Pm,
        TheoremId::PmGeneral,
        TheoremId::UnweightedEven,
        TheoremId::UnweightedOdd,
        TheoremId::FullGroupRemark,
    ];

    /// Command-line name.
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::C2c4Pm => "c2c4-pm",
            TheoremId::PmGeneral => "pm-general",
            TheoremId::UnweightedEven => "unweighted-even",
            TheoremId::UnweightedOdd => "unweighted-odd",
            TheoremId::FullGroupRemark => "full-group",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown theorem '{s}'")))
    }
}

/// Every extremal squarefree sequence, as sorted index lists in colex order.
#[derive(Debug, Clone)]
pub struct ExtremalCensus {
    pub group: GroupSpec,
    pub weights: WeightSet,
    pub kind: ConstantKind,
    pub length: usize,
    pub sequences: Vec<Vec<usize>>,
    pub nodes_visited: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusJson {
    pub schema: u32,
    pub group: String,
    pub weights: String,
    pub kind: ConstantKind,
    pub length: usize,
    pub count: usize,
    pub sequences: Vec<String>,
}

impl ExtremalCensus {
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn to_sequences(&self) -> Vec<Sequence> {
        self.sequences
            .iter()
            .map(|idx| Sequence::from_indices(&self.group, idx).expect("census indices are in range"))
            .collect()
    }

    /// One colex-least representative per automorphism orbit, sorted.
    pub fn orbit_representatives(&self) -> Result<Vec<Vec<usize>>> {
        let perms = automorphism::automorphisms(&self.group)?;
        let mut reps: Vec<Vec<usize>> =
            self.sequences.iter().map(|s| automorphism::canonical_image(&perms, s)).collect();
        reps.sort_unstable_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        reps.dedup();
        Ok(reps)
    }

    pub fn to_json(&self) -> CensusJson {
        CensusJson {
            schema: 1,
            group: self.group.to_string(),
            weights: self.weights.label(),
            kind: self.kind,
            length: self.length,
            count: self.sequences.len(),
            sequences: self.to_sequences().iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// All squarefree sequences of length `value - 1` that fail `kind`.
pub fn enumerate_extremal(
    engine: &Engine,
    group: &GroupSpec,
    weights: &WeightSet,
    kind: ConstantKind,
) -> Result<ExtremalCensus> {
    if kind != ConstantKind::Harborth {
        return Err(Error::Precondition(format!("censuses cover squarefree inverse problems only, not {kind}")));
    }
    let report = engine.harborth(group, weights)?;
    let length = report.value - 1;
    let (sequences, nodes) = engine.failing_squarefree_of_length(group, weights, kind, length)?;
    for s in &sequences {
        let seq = Sequence::from_indices(group, s)?;
        if !witness_fails(kind, weights, &seq)? {
            return Err(Error::InvalidWitness(format!("census member {seq} has a zero-subsum")));
        }
    }
    Ok(ExtremalCensus {
        group: group.clone(),
        weights: weights.clone(),
        kind,
        length,
        sequences,
        nodes_visited: report.nodes_visited + nodes,
    })
}

/// Bases of `C2 + C2n` together with `n`, shared by the predicates.
#[derive(Debug, Clone)]
pub struct InverseContext {
    group: GroupSpec,
    n: usize,
    bases: Vec<Basis2x2n>,
}

impl InverseContext {
    pub fn new(group: &GroupSpec) -> Result<Self> {
        let bases = enumerate_bases_2x2n(group)?;
        let n = group.c2_c2n_half().expect("checked by basis enumeration") as usize;
        Ok(Self { group: group.clone(), n, bases })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bases(&self) -> &[Basis2x2n] {
        &self.bases
    }

    fn check(&self, s: &Sequence, length: usize) -> Result<()> {
        if s.group() != &self.group {
            return Err(Error::GroupMismatch(self.group.to_string(), s.group().to_string()));
        }
        if s.len() != length || !s.is_squarefree() {
            return Err(Error::Precondition(format!(
                "expected a squarefree sequence of length {length}, got {s} (length {})",
                s.len()
            )));
        }
        Ok(())
    }

    /// Splits by the `e1`-coordinate, returning the `e2`-coordinates of each part.
    fn split(&self, basis: &Basis2x2n, idx: &[usize]) -> [Vec<u32>; 2] {
        let mut parts = [Vec::new(), Vec::new()];
        for &i in idx {
            let (a1, a2) = basis.alpha_idx(i);
            parts[a1 as usize].push(a2);
        }
        parts
    }

    pub fn c2c4_pm(&self, s: &Sequence) -> Result<bool> {
        if self.n != 2 {
            return Err(Error::Hypothesis(format!("{} is not C2+C4", self.group)));
        }
        self.check(s, 4)?;
        let idx = s.indices();
        Ok(self.bases.iter().any(|b| {
            let [s0, s1] = self.split(b, &idx);
            match (s0.len(), s1.len()) {
                (1, 3) | (3, 1) => true,
                (2, 2) => {
                    let common: Vec<u32> = s0.iter().copied().filter(|x| s1.contains(x)).collect();
                    if common.len() != 1 {
                        return false;
                    }
                    let h = common[0];
                    let g0 = *s0.iter().find(|&&x| x != h).expect("two distinct terms");
                    let g1 = *s1.iter().find(|&&x| x != h).expect("two distinct terms");
                    g0 != g1 && (g0 + g1) % 2 == 1
                }
                _ => false,
            }
        }))
    }

    /// Number of terms in each coset of `2G`; the labelling of cosets is fixed
    /// by the standard coordinates.
    pub fn coset_counts(&self, s: &Sequence) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for (i, &m) in s.multiplicities().iter().enumerate() {
            let c = self.group.at(i);
            let c = c.coords();
            counts[(c[0] % 2) as usize + 2 * (c[1] % 2) as usize] += m as usize;
        }
        counts
    }

    pub fn pm_general(&self, s: &Sequence) -> Result<bool> {
        if self.n < 3 {
            return Err(Error::Hypothesis(format!("{} needs n >= 3", self.group)));
        }
        self.check(s, 2 * self.n + 1)?;
        Ok(pm_general_counts(self.coset_counts(s), self.n))
    }

    /// The same test through the cosets of an explicit basis.
    pub fn pm_general_with_basis(&self, s: &Sequence, basis: &Basis2x2n) -> Result<bool> {
        if self.n < 3 {
            return Err(Error::Hypothesis(format!("{} needs n >= 3", self.group)));
        }
        self.check(s, 2 * self.n + 1)?;
        let mut counts = [0usize; 4];
        for e in s.terms() {
            counts[basis.coset_index(&e)] += 1;
        }
        Ok(pm_general_counts(counts, self.n))
    }

    pub fn unweighted_even(&self, s: &Sequence) -> Result<bool> {
        if self.n < 4 || self.n % 2 == 1 {
            return Err(Error::Hypothesis(format!("{} needs n even and n >= 4", self.group)));
        }
        self.check(s, 2 * self.n + 1)?;
        let idx = s.indices();
        let modulus = 2 * self.n as u32;
        Ok(self.bases.iter().any(|b| {
            let parts = self.split(b, &idx);
            let odd = &parts[usize::from(parts[0].len().is_multiple_of(2))];
            let sigma = parts.iter().flatten().sum::<u32>() % modulus;
            !odd.contains(&sigma)
        }))
    }

    pub fn unweighted_odd(&self, s: &Sequence) -> Result<bool> {
        if self.n < 3 || self.n.is_multiple_of(2) {
            return Err(Error::Hypothesis(format!("{} needs n odd and n >= 3", self.group)));
        }
        self.check(s, 2 * self.n + 2)?;
        let g = &self.group;
        let sigma = s.sigma().index();
        let k = (2 * self.n + 2) as u32;
        let idx = s.indices();
        let mut shifted = vec![0usize; idx.len()];
        for h in 0..g.order() {
            if g.scale_idx(k, h) != sigma {
                continue;
            }
            let minus_h = g.neg_idx(h);
            for (dst, &i) in shifted.iter_mut().zip(&idx) {
                *dst = g.add_idx(i, minus_h);
            }
            if self.bases.iter().any(|b| self.odd_decomposes(b, &shifted)) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether `t = S0 (e1 + S1) (n e2 + S2) (e1 + n e2 + S3)` with the parts
    /// as required; part elements are recorded as `c` for `2c e2`.
    fn odd_decomposes(&self, basis: &Basis2x2n, t: &[usize]) -> bool {
        let n = self.n as u32;
        let half = self.n.div_ceil(2);
        let mut parts: [Vec<u32>; 4] = Default::default();
        for &i in t {
            let (a1, a2) = basis.alpha_idx(i);
            let b = a2 % 2;
            let v = (a2 + 2 * n - b * n) % (2 * n);
            parts[(a1 + 2 * b) as usize].push(v / 2);
        }
        let mut total = 0u32;
        for part in &parts {
            if part.len() != half || !part.contains(&0) {
                return false;
            }
            if part.iter().any(|&c| c != 0 && part.contains(&(n - c))) {
                return false;
            }
            total += part.iter().sum::<u32>();
        }
        total.is_multiple_of(n)
    }

    /// `2 * Sigma0(g^-1 S) = 2G` for every term `g` of `s`.
    pub fn lemma_proj_full(&self, s: &Sequence) -> Result<bool> {
        if s.group() != &self.group {
            return Err(Error::GroupMismatch(self.group.to_string(), s.group().to_string()));
        }
        let target = self.group.doubling_subgroup();
        for g in s.support() {
            let rest = s.without(&g)?;
            if subsums_sigma0(&rest).dilate(2) != target {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Exactly three cosets occupied, each by an odd number of terms, none above
/// the coset size `n`.
pub fn pm_general_counts(counts: [usize; 4], n: usize) -> bool {
    let occupied = counts.iter().filter(|&&c| c > 0).count();
    counts.iter().sum::<usize>() == 2 * n + 1
        && counts.iter().all(|&c| c <= n)
        && occupied == 3
        && counts.iter().all(|&c| c == 0 || c % 2 == 1)
}

pub fn predicate_c2c4_pm(s: &Sequence) -> Result<bool> {
    InverseContext::new(s.group())?.c2c4_pm(s)
}

pub fn predicate_pm_general(s: &Sequence) -> Result<bool> {
    InverseContext::new(s.group())?.pm_general(s)
}

pub fn predicate_unweighted_even(s: &Sequence) -> Result<bool> {
    InverseContext::new(s.group())?.unweighted_even(s)
}

pub fn predicate_unweighted_odd(s: &Sequence) -> Result<bool> {
    InverseContext::new(s.group())?.unweighted_odd(s)
}

/// Checks the lemma on extremal plus-minus sets of `C2 + C2n`, `n >= 3`.
pub fn lemma_proj_full_check(s: &Sequence) -> Result<bool> {
    let ctx = InverseContext::new(s.group())?;
    if ctx.n < 3 {
        return Err(Error::Hypothesis(format!("{} needs n >= 3", s.group())));
    }
    ctx.lemma_proj_full(s)
}

/// Census against predicate, compared as sets.
#[derive(Debug, Clone)]
pub struct CharacterizationReport {
    pub theorem_id: TheoremId,
    pub group: GroupSpec,
    pub weights: WeightSet,
    pub length: usize,
    pub census_count: usize,
    pub predicate_count: usize,
    pub symmetric_difference: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterizationJson {
    pub schema: u32,
    pub theorem_id: TheoremId,
    pub group: String,
    pub weights: String,
    pub length: usize,
    pub census_count: usize,
    pub predicate_count: usize,
    pub symmetric_difference: Vec<String>,
    pub verdict: &'static str,
}

impl CharacterizationReport {
    pub fn holds(&self) -> bool {
        self.symmetric_difference.is_empty()
    }

    pub fn to_json(&self) -> CharacterizationJson {
        CharacterizationJson {
            schema: 1,
            theorem_id: self.theorem_id,
            group: self.group.to_string(),
            weights: self.weights.label(),
            length: self.length,
            census_count: self.census_count,
            predicate_count: self.predicate_count,
            symmetric_difference: self
                .symmetric_difference
                .iter()
                .map(|idx| Sequence::from_indices(&self.group, idx).expect("in range").to_string())
                .collect(),
            verdict: if self.holds() { "AGREE" } else { "DISAGREE" },
        }
    }
}

/// The weights a theorem is stated for, after checking its group hypothesis.
/// `weights` is only consulted for the full-group remark (plus-minus if absent).
pub fn theorem_weights(group: &GroupSpec, theorem: TheoremId, weights: Option<&WeightSet>) -> Result<WeightSet> {
    let exp = group.exponent();
    let half = group.c2_c2n_half().map(|n| n as usize);
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Hypothesis(format!("{theorem} needs {what}, got {}", group.name())))
        }
    };
    let fixed = match theorem {
        TheoremId::C2c4Pm => {
            need(half == Some(2), "C2+C4")?;
            WeightSet::plus_minus(exp)
        }
        TheoremId::PmGeneral => {
            need(half.is_some_and(|n| n >= 3), "C2+C2n with n >= 3")?;
            WeightSet::plus_minus(exp)
        }
        TheoremId::UnweightedEven => {
            need(half.is_some_and(|n| n >= 4 && n % 2 == 0), "C2+C2n with n even and n >= 4")?;
            WeightSet::classic(exp)
        }
        TheoremId::UnweightedOdd => {
            need(half.is_some_and(|n| n >= 3 && n % 2 == 1), "C2+C2n with n odd and n >= 3")?;
            WeightSet::classic(exp)
        }
        TheoremId::FullGroupRemark => {
            let w = weights.cloned().unwrap_or_else(|| WeightSet::plus_minus(exp));
            if !gw_equals_order_plus_one(group, &w)? {
                return Err(Error::Hypothesis(format!("g_W({}) != |G| + 1 for W = {w}", group.name())));
            }
            return Ok(w);
        }
    };
    if let Some(w) = weights {
        w.check_group(group)?;
        if w.classes() != fixed.classes() {
            return Err(Error::Hypothesis(format!("{theorem} is stated for W = {}, got {w}", fixed.label())));
        }
    }
    Ok(fixed)
}

/// Runs the census and the theorem's predicate and compares them.
pub fn verify_characterization(
    engine: &Engine,
    group: &GroupSpec,
    theorem: TheoremId,
    weights: Option<&WeightSet>,
) -> Result<CharacterizationReport> {
    let weights = theorem_weights(group, theorem, weights)?;
    let census = enumerate_extremal(engine, group, &weights, ConstantKind::Harborth)?;
    let length = census.length;
    let ctx = if theorem == TheoremId::FullGroupRemark { None } else { Some(InverseContext::new(group)?) };

    let mut all = Vec::new();
    let _ = enumerate_squarefree(group, length, |idx| {
        all.push(idx.to_vec());
        ControlFlow::Continue(())
    });
    let predicate = |idx: &Vec<usize>| -> Result<bool> {
        let s = Sequence::from_indices(group, idx)?;
        match (theorem, &ctx) {
            (TheoremId::FullGroupRemark, _) => Ok(idx.len() == group.order()),
            (TheoremId::C2c4Pm, Some(c)) => c.c2c4_pm(&s),
            (TheoremId::PmGeneral, Some(c)) => c.pm_general(&s),
            (TheoremId::UnweightedEven, Some(c)) => c.unweighted_even(&s),
            (TheoremId::UnweightedOdd, Some(c)) => c.unweighted_odd(&s),
            _ => unreachable!("context exists for C2+C2n theorems"),
        }
    };
    let flags: Vec<Result<bool>> = engine.install(|| all.par_iter().map(predicate).collect());
    let mut predicted = Vec::new();
    for (idx, keep) in all.into_iter().zip(flags) {
        if keep? {
            predicted.push(idx);
        }
    }

    // both lists are in colex order
    let mut diff = Vec::new();
    let (mut i, mut j) = (0, 0);
    let (a, b) = (&census.sequences, &predicted);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.iter().rev().cmp(y.iter().rev()),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => {
                diff.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                diff.push(b[j].clone());
                j += 1;
            }
        }
    }
    Ok(CharacterizationReport {
        theorem_id: theorem,
        group: group.clone(),
        weights,
        length,
        census_count: census.sequences.len(),
        predicate_count: predicted.len(),
        symmetric_difference: diff,
    })
}
