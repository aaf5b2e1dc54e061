//! Sequences (multisets) over a group, their subsum sets and the
//! length-indexed weighted-subsum table every constant is computed from.

use std::fmt;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Hom, SumSet};

/// A nonempty set of weights, stored as residues modulo `exp(G)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSet {
    classes: Vec<u32>,
    modulus: u32,
    trivial: bool,
}

impl WeightSet {
    pub fn new(weights: &[i64], exponent: u32) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::WeightSyntax(String::new(), "weight set must be nonempty".into()));
        }
        let m = exponent.max(1);
        let mut classes: Vec<u32> = weights.iter().map(|w| w.rem_euclid(m as i64) as u32).collect();
        classes.sort_unstable();
        classes.dedup();
        let trivial = classes[0] == 0;
        Ok(Self { classes, modulus: m, trivial })
    }

    /// `{1, exp - 1}`.
    pub fn plus_minus(exponent: u32) -> Self {
        Self::new(&[1, -1], exponent).expect("nonempty")
    }

    /// `{1}`.
    pub fn classic(exponent: u32) -> Self {
        Self::new(&[1], exponent).expect("nonempty")
    }

    /// Parses `"pm"`, `"classic"` or a comma list of integers.
    pub fn parse(spec: &str, exponent: u32) -> Result<Self> {
        match spec.trim() {
            "pm" | "plus-minus" | "±" => Ok(Self::plus_minus(exponent)),
            "classic" => Ok(Self::classic(exponent)),
            "" => Err(Error::WeightSyntax(spec.to_string(), "empty".into())),
            list => {
                let ws = list
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::WeightSyntax(spec.to_string(), format!("`{}` is not an integer", t.trim())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::new(&ws, exponent)
            }
        }
    }

    pub fn classes(&self) -> &[u32] {
        &self.classes
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_plus_minus(&self) -> bool {
        *self == Self::plus_minus(self.modulus)
    }

    pub fn is_classic(&self) -> bool {
        *self == Self::classic(self.modulus)
    }

    /// Whether some `w` and `-w` are both weights, so that `g g` always has a
    /// weighted zero-sum of length 2.
    pub fn has_opposite_pair(&self) -> bool {
        let m = self.modulus;
        self.classes.iter().any(|&w| self.classes.contains(&((m - w) % m)))
    }

    pub(crate) fn check_group(&self, group: &GroupSpec) -> Result<()> {
        if self.modulus == group.exponent().max(1) {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "weights are residues mod {} but exp({}) = {}",
                self.modulus,
                group,
                group.exponent()
            )))
        }
    }

    /// Short label: `pm`, `classic`, or the class list.
    pub fn label(&self) -> String {
        if self.is_classic() {
            "classic".into()
        } else if self.is_plus_minus() {
            "pm".into()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// A sequence over a group, stored as a multiplicity vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Sequence {
    group: GroupSpec,
    mult: Vec<u32>,
}

impl Sequence {
    pub fn empty(group: &GroupSpec) -> Self {
        Self { group: group.clone(), mult: vec![0; group.order()] }
    }

    pub fn from_indices(group: &GroupSpec, indices: &[usize]) -> Result<Self> {
        let mut s = Self::empty(group);
        for &i in indices {
            if i >= group.order() {
                return Err(Error::ElementMismatch(group.to_string()));
            }
            s.mult[i] += 1;
        }
        Ok(s)
    }

    pub fn from_elements(group: &GroupSpec, elems: &[GroupElement]) -> Result<Self> {
        let mut s = Self::empty(group);
        for e in elems {
            s.push(*e)?;
        }
        Ok(s)
    }

    /// The full group as a squarefree sequence.
    pub fn full(group: &GroupSpec) -> Self {
        Self { group: group.clone(), mult: vec![1; group.order()] }
    }

    /// Parses `"(1,3);(0,2)^2"`. Bare integers are accepted for cyclic groups.
    pub fn parse(group: &GroupSpec, literal: &str) -> Result<Self> {
        let err = |msg: String| Error::SequenceSyntax(literal.to_string(), msg);
        let mut s = Self::empty(group);
        for tok in literal.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let (body, times) = match tok.split_once('^') {
                Some((b, k)) => (b.trim(), k.trim().parse::<u32>().map_err(|_| err(format!("bad multiplicity in `{tok}`")))?),
                None => (tok, 1),
            };
            let inner = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(body);
            let coords = inner
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| err(format!("bad coordinate in `{tok}`"))))
                .collect::<Result<Vec<_>>>()?;
            let e = group
                .element(&coords)
                .map_err(|_| err(format!("`{tok}` has {} coordinates, group rank is {}", coords.len(), group.rank())))?;
            s.mult[e.index()] += times;
        }
        Ok(s)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.mult.iter().map(|&m| m as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    pub fn multiplicity(&self, e: &GroupElement) -> u32 {
        self.mult[e.index()]
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub fn is_squarefree(&self) -> bool {
        self.mult.iter().all(|&m| m <= 1)
    }

    pub fn support(&self) -> Vec<GroupElement> {
        (0..self.mult.len()).filter(|&i| self.mult[i] > 0).map(|i| self.group.at(i)).collect()
    }

    /// Term indices in nondecreasing order, repeated by multiplicity.
    pub fn indices(&self) -> Vec<usize> {
        self.mult
            .iter()
            .enumerate()
            .flat_map(|(i, &m)| std::iter::repeat_n(i, m as usize))
            .collect()
    }

    pub fn terms(&self) -> Vec<GroupElement> {
        self.indices().into_iter().map(|i| self.group.at(i)).collect()
    }

    pub fn push(&mut self, e: GroupElement) -> Result<()> {
        if !self.group.contains(&e) {
            return Err(Error::ElementMismatch(self.group.to_string()));
        }
        self.mult[e.index()] += 1;
        Ok(())
    }

    /// `g^{-1} S`: removes one copy of `g`.
    pub fn without(&self, e: &GroupElement) -> Result<Sequence> {
        if !self.group.contains(e) || self.mult[e.index()] == 0 {
            return Err(Error::Precondition(format!("{:?} does not divide the sequence", e.coords())));
        }
        let mut s = self.clone();
        s.mult[e.index()] -= 1;
        Ok(s)
    }

    pub fn sigma(&self) -> GroupElement {
        sigma(self)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &m) in self.mult.iter().enumerate().filter(|(_, &m)| m > 0) {
            if !first {
                f.write_str(";")?;
            }
            first = false;
            let coords: Vec<String> = self.group.at(i).coords().iter().map(u8::to_string).collect();
            write!(f, "({})", coords.join(","))?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence[{}]({})", self.group, self)
    }
}

/// `sigma(S)`, the sum of all terms.
pub fn sigma(s: &Sequence) -> GroupElement {
    let g = s.group();
    let idx = s
        .mult
        .iter()
        .enumerate()
        .fold(0usize, |acc, (i, &m)| g.add_idx(acc, g.scale_idx(m, i)));
    g.at(idx)
}

/// `Sigma^0(S)`: all subsequence sums, the empty one included.
pub fn subsums_sigma0(s: &Sequence) -> SumSet {
    let g = s.group();
    let mut bits = 1u64;
    for (i, &m) in s.mult.iter().enumerate() {
        for _ in 0..m {
            bits |= g.translate(bits, i);
        }
    }
    SumSet::from_bits(g, bits)
}

/// Distinct images `w * g` for the weights, as element indices.
pub(crate) fn weighted_images(group: &GroupSpec, weights: &WeightSet, g: usize) -> Vec<usize> {
    let mut out: Vec<usize> = weights.classes().iter().map(|&w| group.scale_idx(w, g)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `sigma_W(S)`: every W-weighted sum of the whole sequence.
pub fn weighted_sums(s: &Sequence, weights: &WeightSet) -> Result<SumSet> {
    let g = s.group();
    weights.check_group(g)?;
    let mut bits = 1u64;
    for i in s.indices() {
        bits = weighted_images(g, weights, i)
            .into_iter()
            .fold(0u64, |acc, t| acc | g.translate(bits, t));
    }
    Ok(SumSet::from_bits(g, bits))
}

/// One DP step: fold a term with the given weighted images into the rows.
#[inline]
pub(crate) fn extend_rows(group: &GroupSpec, parent: &[u64], images: &[usize], child: &mut [u64]) {
    child[0] = parent[0];
    for l in 1..parent.len() {
        let prev = parent[l - 1];
        let mut acc = parent[l];
        if prev != 0 {
            for &t in images {
                acc |= group.translate(prev, t);
            }
        }
        child[l] = acc;
    }
}

/// For each length `l <= cap`, the union of `sigma_W(T)` over all
/// subsequences `T` of length `l`.
#[derive(Debug, Clone)]
pub struct LengthSumTable {
    group: GroupSpec,
    rows: Vec<u64>,
}

impl LengthSumTable {
    pub fn cap(&self) -> usize {
        self.rows.len() - 1
    }

    /// Row `l`; empty beyond the cap.
    pub fn row(&self, l: usize) -> SumSet {
        SumSet::from_bits(&self.group, self.rows.get(l).copied().unwrap_or(0))
    }

    pub fn has_zero(&self, l: usize) -> bool {
        self.rows.get(l).is_some_and(|r| r & 1 == 1)
    }
}

pub fn length_sum_table(s: &Sequence, weights: &WeightSet, cap: usize) -> Result<LengthSumTable> {
    let g = s.group();
    weights.check_group(g)?;
    let mut rows = vec![0u64; cap + 1];
    rows[0] = 1;
    let mut next = rows.clone();
    for i in s.indices() {
        extend_rows(g, &rows, &weighted_images(g, weights, i), &mut next);
        std::mem::swap(&mut rows, &mut next);
    }
    Ok(LengthSumTable { group: g.clone(), rows })
}

/// Whether some length-`l` subsequence has 0 among its W-weighted sums.
pub fn has_weighted_zero_of_length(s: &Sequence, weights: &WeightSet, l: usize) -> Result<bool> {
    if l > s.len() {
        weights.check_group(s.group())?;
        return Ok(false);
    }
    Ok(length_sum_table(s, weights, l)?.has_zero(l))
}

/// Visits every `l`-subset of `G` once, in colex order, as sorted index lists.
pub fn enumerate_squarefree<F>(group: &GroupSpec, l: usize, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = group.order();
    if l > n {
        return ControlFlow::Continue(());
    }
    let limit = 1u128 << n;
    let mut mask: u128 = (1u128 << l) - 1;
    let mut buf = Vec::with_capacity(l);
    loop {
        buf.clear();
        let mut rest = mask;
        while rest != 0 {
            buf.push(rest.trailing_zeros() as usize);
            rest &= rest - 1;
        }
        visit(&buf)?;
        if mask == 0 {
            return ControlFlow::Continue(());
        }
        // next mask with the same popcount (Gosper)
        let low = mask & mask.wrapping_neg();
        let ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
        if mask >= limit {
            return ControlFlow::Continue(());
        }
    }
}

/// Visits every multiset of size `l` with multiplicities at most `max_mult`,
/// as nondecreasing index lists in lexicographic order.
pub fn enumerate_multisets<F>(group: &GroupSpec, l: usize, max_mult: usize, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    fn rec<F>(n: usize, l: usize, cap: usize, start: usize, run: usize, buf: &mut Vec<usize>, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if buf.len() == l {
            return visit(buf);
        }
        for x in start..n {
            let r = if buf.last() == Some(&x) { run + 1 } else { 1 };
            if r > cap {
                continue;
            }
            buf.push(x);
            rec(n, l, cap, x, r, buf, visit)?;
            buf.pop();
        }
        ControlFlow::Continue(())
    }
    let mut buf = Vec::with_capacity(l);
    rec(group.order(), l, max_mult, 0, 0, &mut buf, &mut visit)
}

/// Image of a sequence under a homomorphism; the length is preserved.
pub fn apply_hom(hom: &Hom, s: &Sequence) -> Result<Sequence> {
    let source = s.group();
    let target = hom.target(source)?;
    let mut out = Sequence::empty(&target);
    for (i, &m) in s.mult.iter().enumerate().filter(|(_, &m)| m > 0) {
        out.mult[hom.map_index(source, &target, i)] += m;
    }
    Ok(out)
}
