//! Finite abelian groups `C_{n1} + ... + C_{nr}` in invariant-factor form.
//!
//! Elements are addressed by a dense mixed-radix index with the first
//! invariant factor as the least significant digit, so every element fits
//! one bit position of a `u64`. All arithmetic is table driven; translating
//! a whole [`SumSet`] by an element is a handful of masked block rotations.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported group order; a [`SumSet`] is a single `u64`.
pub const MAX_ORDER: usize = 64;
/// Default search ceiling on `|G|`.
pub const DEFAULT_CEILING: usize = 64;
/// Largest possible rank for a group of order at most 64.
pub const MAX_RANK: usize = 6;

#[derive(Debug, Clone, Copy, Default)]
struct Rotation {
    shift: u32,
    back: u32,
    lo: u64,
    hi: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct ShiftPlan {
    len: u8,
    steps: [Rotation; MAX_RANK],
}

#[derive(Debug)]
struct Inner {
    factors: Vec<u32>,
    strides: Vec<usize>,
    order: usize,
    exponent: u32,
    coords: Vec<[u8; MAX_RANK]>,
    add: Vec<u8>,
    neg: Vec<u8>,
    plans: Vec<ShiftPlan>,
    full: u64,
}

/// A finite abelian group given by its invariant factors `n1 | n2 | ... | nr`.
///
/// Cheap to clone; all clones share the precomputed tables.
#[derive(Clone)]
pub struct GroupSpec(Arc<Inner>);

/// An element in mixed-radix coordinates together with its dense index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    index: u8,
    rank: u8,
    coords: [u8; MAX_RANK],
}

impl GroupElement {
    pub fn index(&self) -> usize {
        self.index as usize
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords[..self.rank as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }
}

impl GroupSpec {
    /// Builds a group at the default ceiling.
    pub fn new(factors: &[u32]) -> Result<Self> {
        Self::with_ceiling(factors, DEFAULT_CEILING)
    }

    /// Builds a group, rejecting orders above `ceiling`. An empty factor list
    /// is the trivial group.
    pub fn with_ceiling(factors: &[u32], ceiling: usize) -> Result<Self> {
        if ceiling == 0 || ceiling > MAX_ORDER {
            return Err(Error::UnsupportedCeiling(ceiling));
        }
        if factors.iter().any(|&n| n < 2) || factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvariantChain(factors.to_vec()));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
            .unwrap_or(usize::MAX);
        if order > ceiling {
            return Err(Error::AboveCeiling { order, ceiling });
        }
        Ok(Self(Arc::new(Inner::build(factors.to_vec(), order))))
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        if n == 1 {
            Self::new(&[])
        } else {
            Self::new(&[n])
        }
    }

    /// Parses a comma-separated invariant-factor list such as `"2,12"`.
    pub fn parse(spec: &str) -> Result<Self> {
        Self::parse_with_ceiling(spec, DEFAULT_CEILING)
    }

    pub fn parse_with_ceiling(spec: &str, ceiling: usize) -> Result<Self> {
        let factors = parse_factors(spec)?;
        Self::with_ceiling(&factors, ceiling)
    }

    pub fn factors(&self) -> &[u32] {
        &self.0.factors
    }

    pub fn rank(&self) -> usize {
        self.0.factors.len()
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn exponent(&self) -> u32 {
        self.0.exponent
    }

    /// Bit mask with one bit per element.
    pub fn full_mask(&self) -> u64 {
        self.0.full
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank() <= 1
    }

    pub fn is_elementary_2(&self) -> bool {
        !self.0.factors.is_empty() && self.0.factors.iter().all(|&n| n == 2)
    }

    /// Returns `n` when the group is `C2 + C2n`.
    pub fn c2_c2n_half(&self) -> Option<u32> {
        match self.factors() {
            [2, m] if m % 2 == 0 => Some(m / 2),
            _ => None,
        }
    }

    /// The group as `"C2+C4"`.
    pub fn name(&self) -> String {
        if self.0.factors.is_empty() {
            return "C1".to_string();
        }
        self.0
            .factors
            .iter()
            .map(|n| format!("C{n}"))
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn zero(&self) -> GroupElement {
        self.at(0)
    }

    /// The element with the given dense index. Panics when out of range.
    pub fn at(&self, index: usize) -> GroupElement {
        assert!(index < self.order(), "element index {index} out of range");
        GroupElement {
            index: index as u8,
            rank: self.rank() as u8,
            coords: self.0.coords[index],
        }
    }

    /// Builds an element from integer coordinates, reducing each modulo its factor.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::ElementMismatch(self.to_string()));
        }
        let index = coords
            .iter()
            .zip(&self.0.factors)
            .zip(&self.0.strides)
            .map(|((&c, &n), &s)| c.rem_euclid(n as i64) as usize * s)
            .sum();
        Ok(self.at(index))
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.at(i))
    }

    /// Whether the element's coordinates are consistent with this group.
    pub fn contains(&self, a: &GroupElement) -> bool {
        a.rank as usize == self.rank()
            && a.index() < self.order()
            && self.0.coords[a.index()] == a.coords
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::ElementMismatch(self.to_string()))
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.at(self.add_idx(a.index(), b.index())))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.at(self.neg_idx(a.index())))
    }

    /// `k * a`, computed coordinate-wise modulo each factor.
    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        let coords: Vec<i64> = a
            .coords()
            .iter()
            .zip(&self.0.factors)
            .map(|(&c, &n)| (k.rem_euclid(n as i64) * c as i64) % n as i64)
            .collect();
        self.element(&coords).expect("rank checked by caller")
    }

    /// Least `k >= 1` with `k * a = 0`.
    pub fn order_of(&self, a: &GroupElement) -> u32 {
        a.coords()
            .iter()
            .zip(&self.0.factors)
            .map(|(&c, &n)| n / gcd(n, c as u32))
            .fold(1, lcm)
    }

    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        self.0.add[a * self.order() + b] as usize
    }

    pub(crate) fn neg_idx(&self, a: usize) -> usize {
        self.0.neg[a] as usize
    }

    pub(crate) fn scale_idx(&self, k: u32, a: usize) -> usize {
        let mut acc = 0;
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_idx(acc, base);
            }
            base = self.add_idx(base, base);
            k >>= 1;
        }
        acc
    }

    pub(crate) fn order_idx(&self, a: usize) -> u32 {
        self.order_of(&self.at(a))
    }

    /// Translates a bit set by the element with index `t`.
    #[inline]
    pub(crate) fn translate(&self, mask: u64, t: usize) -> u64 {
        let plan = &self.0.plans[t];
        let mut m = mask;
        for r in &plan.steps[..plan.len as usize] {
            m = ((m << r.shift) & r.lo) | ((m >> r.back) & r.hi);
        }
        m
    }

    /// `2G = {2g : g in G}`.
    pub fn doubling_subgroup(&self) -> SumSet {
        let bits = (0..self.order()).fold(0u64, |acc, i| acc | 1 << self.add_idx(i, i));
        SumSet::from_bits(self, bits)
    }

    fn same_as(&self, other: &GroupSpec) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.factors == other.0.factors
    }
}

impl Inner {
    fn build(factors: Vec<u32>, order: usize) -> Self {
        let mut strides = Vec::with_capacity(factors.len());
        let mut s = 1usize;
        for &n in &factors {
            strides.push(s);
            s *= n as usize;
        }
        let coords: Vec<[u8; MAX_RANK]> = (0..order)
            .map(|mut idx| {
                let mut c = [0u8; MAX_RANK];
                for (slot, &n) in c.iter_mut().zip(&factors) {
                    *slot = (idx % n as usize) as u8;
                    idx /= n as usize;
                }
                c
            })
            .collect();
        let encode = |c: &[u32]| -> usize { c.iter().zip(&strides).map(|(&x, &s)| x as usize * s).sum() };
        let mut add = vec![0u8; order * order];
        let mut neg = vec![0u8; order];
        for a in 0..order {
            for b in 0..order {
                let sum: Vec<u32> = factors
                    .iter()
                    .enumerate()
                    .map(|(i, &n)| (coords[a][i] as u32 + coords[b][i] as u32) % n)
                    .collect();
                add[a * order + b] = encode(&sum) as u8;
            }
            let inv: Vec<u32> = factors
                .iter()
                .enumerate()
                .map(|(i, &n)| (n - coords[a][i] as u32) % n)
                .collect();
            neg[a] = encode(&inv) as u8;
        }
        let full = if order == 64 { u64::MAX } else { (1u64 << order) - 1 };
        let plans = (0..order)
            .map(|t| {
                let mut plan = ShiftPlan::default();
                for (i, &n) in factors.iter().enumerate() {
                    let c = coords[t][i] as usize;
                    if c == 0 {
                        continue;
                    }
                    let block = strides[i] * n as usize;
                    let shift = c * strides[i];
                    let (mut lo, mut hi) = (0u64, 0u64);
                    for p in 0..order {
                        if p % block >= shift {
                            lo |= 1 << p;
                        } else {
                            hi |= 1 << p;
                        }
                    }
                    plan.steps[plan.len as usize] = Rotation {
                        shift: shift as u32,
                        back: (block - shift) as u32,
                        lo,
                        hi,
                    };
                    plan.len += 1;
                }
                plan
            })
            .collect();
        let exponent = factors.last().copied().unwrap_or(1);
        Inner { factors, strides, order, exponent, coords, add, neg, plans, full }
    }
}

fn parse_factors(spec: &str) -> Result<Vec<u32>> {
    let trimmed = spec.trim();
    if trimmed.is_empty() {
        return Err(Error::GroupSyntax(spec.to_string(), "empty".into()));
    }
    let factors = trimmed
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| Error::GroupSyntax(spec.to_string(), format!("`{}` is not a positive integer", tok.trim())))
        })
        .collect::<Result<Vec<u32>>>()?;
    if factors == [1] {
        return Ok(Vec::new());
    }
    Ok(factors)
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for GroupSpec {}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({})", self.name())
    }
}

/// Renders the invariant factors as `"2,4"`; the trivial group renders as `"1"`.
impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.factors.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

/// A subset of a group stored as one bit per element.
#[derive(Clone)]
pub struct SumSet {
    bits: u64,
    group: GroupSpec,
}

impl SumSet {
    pub fn empty(group: &GroupSpec) -> Self {
        Self::from_bits(group, 0)
    }

    pub fn full(group: &GroupSpec) -> Self {
        Self::from_bits(group, group.full_mask())
    }

    pub fn singleton(group: &GroupSpec, e: &GroupElement) -> Self {
        Self::from_bits(group, 1 << e.index())
    }

    pub fn from_elements<'a>(group: &GroupSpec, elems: impl IntoIterator<Item = &'a GroupElement>) -> Self {
        let bits = elems.into_iter().fold(0u64, |acc, e| acc | 1 << e.index());
        Self::from_bits(group, bits)
    }

    pub(crate) fn from_bits(group: &GroupSpec, bits: u64) -> Self {
        Self { bits: bits & group.full_mask(), group: group.clone() }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.group.contains(e) && self.bits >> e.index() & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == self.group.full_mask()
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.group.order())
            .filter(|&i| self.bits >> i & 1 == 1)
            .map(|i| self.group.at(i))
            .collect()
    }

    pub fn union(&self, other: &SumSet) -> Result<SumSet> {
        self.same_group(other)?;
        Ok(Self::from_bits(&self.group, self.bits | other.bits))
    }

    /// `g + A`.
    pub fn translate(&self, g: &GroupElement) -> Result<SumSet> {
        self.group.check(g)?;
        Ok(Self::from_bits(&self.group, self.group.translate(self.bits, g.index())))
    }

    /// `k . A = {k a : a in A}` (dilation, not the k-fold sumset).
    pub fn dilate(&self, k: i64) -> SumSet {
        let g = &self.group;
        let bits = self
            .elements()
            .iter()
            .fold(0u64, |acc, a| acc | 1 << g.scale(k, a).index());
        Self::from_bits(g, bits)
    }

    /// `A + B = {a + b}`.
    pub fn sumset(&self, other: &SumSet) -> Result<SumSet> {
        self.same_group(other)?;
        let g = &self.group;
        if self.len() + other.len() > g.order() {
            return Ok(SumSet::full(g));
        }
        let mut bits = 0u64;
        let mut rest = self.bits;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            bits |= g.translate(other.bits, a);
        }
        Ok(Self::from_bits(g, bits))
    }

    fn same_group(&self, other: &SumSet) -> Result<()> {
        if self.group.same_as(&other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(self.group.to_string(), other.group.to_string()))
        }
    }
}

impl PartialEq for SumSet {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.group.same_as(&other.group)
    }
}

impl Eq for SumSet {}

impl fmt::Debug for SumSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.elements().iter().map(|e| format!("{:?}", e.coords())).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// A basis `(e1, e2)` of `C2 + C2n` with `ord e1 = 2` and `ord e2 = 2n`.
#[derive(Debug, Clone)]
pub struct Basis2x2n {
    group: GroupSpec,
    e1: GroupElement,
    e2: GroupElement,
    // alpha coordinates (a1, a2) of each element, by dense index
    alphas: Vec<(u8, u8)>,
}

impl Basis2x2n {
    /// Checks the orders and that `(a1, a2) -> a1 e1 + a2 e2` is a bijection.
    pub fn new(group: &GroupSpec, e1: GroupElement, e2: GroupElement) -> Result<Self> {
        let n = group.c2_c2n_half().ok_or_else(|| shape_error(group))?;
        group.check(&e1)?;
        group.check(&e2)?;
        if group.order_of(&e1) != 2 || group.order_of(&e2) != 2 * n {
            return Err(Error::Hypothesis(format!(
                "({:?}, {:?}) do not have orders (2, {})",
                e1.coords(),
                e2.coords(),
                2 * n
            )));
        }
        let mut alphas = vec![(u8::MAX, u8::MAX); group.order()];
        for a1 in 0..2u32 {
            for a2 in 0..2 * n {
                let idx = group.add_idx(group.scale_idx(a1, e1.index()), group.scale_idx(a2, e2.index()));
                if alphas[idx].0 != u8::MAX {
                    return Err(Error::Hypothesis(format!(
                        "({:?}, {:?}) is not a basis",
                        e1.coords(),
                        e2.coords()
                    )));
                }
                alphas[idx] = (a1 as u8, a2 as u8);
            }
        }
        Ok(Self { group: group.clone(), e1, e2, alphas })
    }

    pub fn e1(&self) -> GroupElement {
        self.e1
    }

    pub fn e2(&self) -> GroupElement {
        self.e2
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// The unique `(a1, a2)` with `g = a1 e1 + a2 e2`.
    pub fn decompose(&self, g: &GroupElement) -> (u32, u32) {
        let (a1, a2) = self.alphas[g.index()];
        (a1 as u32, a2 as u32)
    }

    pub(crate) fn alpha_idx(&self, idx: usize) -> (u32, u32) {
        let (a1, a2) = self.alphas[idx];
        (a1 as u32, a2 as u32)
    }

    /// Index of the coset of `g` in `[2G, e1 + 2G, e2 + 2G, e1 + e2 + 2G]`.
    pub fn coset_index(&self, g: &GroupElement) -> usize {
        let (a1, a2) = self.decompose(g);
        (a1 + 2 * (a2 % 2)) as usize
    }
}

fn shape_error(group: &GroupSpec) -> Error {
    Error::WrongShape { group: group.to_string(), expected: "C2+C2n" }
}

/// All bases of `C2 + C2n`, sorted by `(index(e1), index(e2))`.
///
/// Brute force over element pairs with an explicit bijectivity check.
pub fn enumerate_bases_2x2n(group: &GroupSpec) -> Result<Vec<Basis2x2n>> {
    let n = group.c2_c2n_half().ok_or_else(|| shape_error(group))?;
    let mut out = Vec::new();
    for e1 in group.elements().filter(|e| group.order_of(e) == 2) {
        for e2 in group.elements().filter(|e| group.order_of(e) == 2 * n) {
            if let Ok(b) = Basis2x2n::new(group, e1, e2) {
                out.push(b);
            }
        }
    }
    Ok(out)
}

/// Coset of `g` modulo `2G` with respect to `basis`.
pub fn coset_index_mod_2g(group: &GroupSpec, basis: &Basis2x2n, g: &GroupElement) -> Result<usize> {
    if group.c2_c2n_half().is_none() {
        return Err(shape_error(group));
    }
    if !basis.group.same_as(group) {
        return Err(Error::GroupMismatch(group.to_string(), basis.group.to_string()));
    }
    group.check(g)?;
    Ok(basis.coset_index(g))
}

/// The homomorphisms used on sequences: coordinate projection, the quotient
/// map `G -> G/2G`, translation `g + S` and dilation `k . S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hom {
    Projection(usize),
    QuotientBy2G,
    Translate(GroupElement),
    Dilate(i64),
}

impl Hom {
    /// Codomain of the map.
    pub fn target(&self, group: &GroupSpec) -> Result<GroupSpec> {
        match *self {
            Hom::Projection(i) => {
                let n = *group
                    .factors()
                    .get(i)
                    .ok_or_else(|| Error::Precondition(format!("no coordinate {i} in {group}")))?;
                GroupSpec::cyclic(n)
            }
            Hom::QuotientBy2G => {
                let evens = group.factors().iter().filter(|&&n| n % 2 == 0).count();
                GroupSpec::new(&vec![2; evens])
            }
            Hom::Translate(g) => {
                group.check(&g)?;
                Ok(group.clone())
            }
            Hom::Dilate(_) => Ok(group.clone()),
        }
    }

    /// Image of the element with index `idx`, as an index in `target`.
    pub(crate) fn map_index(&self, group: &GroupSpec, target: &GroupSpec, idx: usize) -> usize {
        let a = group.at(idx);
        match *self {
            Hom::Projection(i) => a.coords()[i] as usize,
            Hom::QuotientBy2G => {
                let coords: Vec<i64> = a
                    .coords()
                    .iter()
                    .zip(group.factors())
                    .filter(|(_, &n)| n % 2 == 0)
                    .map(|(&c, _)| (c % 2) as i64)
                    .collect();
                target.element(&coords).expect("quotient rank").index()
            }
            Hom::Translate(g) => group.add_idx(idx, g.index()),
            Hom::Dilate(k) => group.scale(k, &a).index(),
        }
    }
}
