//! Closed-form values for the families where they are known. Each value
//! carries a short source tag; groups and weights outside a family come back
//! as not applicable instead of being extrapolated.

use serde::Serialize;

use crate::engine::ConstantKind;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::sequence::WeightSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Point(usize),
    Interval([usize; 2]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaValue {
    pub value: Option<Value>,
    pub source: &'static str,
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl FormulaValue {
    fn point(v: usize, source: &'static str) -> Self {
        Self { value: Some(Value::Point(v)), source, applicable: true, reason: None }
    }

    fn interval(lo: usize, hi: usize, source: &'static str) -> Self {
        if lo == hi {
            return Self::point(lo, source);
        }
        Self { value: Some(Value::Interval([lo, hi])), source, applicable: true, reason: None }
    }

    fn not_applicable(reason: impl Into<String>) -> Self {
        Self { value: None, source: "none", applicable: false, reason: Some(reason.into()) }
    }

    pub fn point_value(&self) -> Option<usize> {
        match self.value {
            Some(Value::Point(v)) => Some(v),
            _ => None,
        }
    }

    /// Whether an exact value is consistent with this formula.
    pub fn admits(&self, v: usize) -> bool {
        match self.value {
            Some(Value::Point(p)) => p == v,
            Some(Value::Interval([lo, hi])) => lo <= v && v <= hi,
            None => false,
        }
    }

    /// `"8"` or `"[3,4]"`; empty when not applicable.
    pub fn render(&self) -> String {
        match self.value {
            Some(Value::Point(p)) => p.to_string(),
            Some(Value::Interval([lo, hi])) => format!("[{lo},{hi}]"),
            None => String::new(),
        }
    }
}

fn log2_floor(x: usize) -> usize {
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

/// Whether `g_W(G) = |G| + 1`: `G` is an elementary 2-group, or `G` is cyclic
/// of even order `n` and all weights lie in one class `x + 2^q Z` with `x` odd
/// and `2^q || n`.
pub fn gw_equals_order_plus_one(group: &GroupSpec, weights: &WeightSet) -> Result<bool> {
    weights.check_group(group)?;
    if weights.is_trivial() {
        return Err(Error::TrivialWeights);
    }
    if group.is_elementary_2() {
        return Ok(true);
    }
    let n = group.order();
    if !group.is_cyclic() || n % 2 == 1 {
        return Ok(false);
    }
    let modulus = 1u32 << n.trailing_zeros();
    let classes = weights.classes();
    let x = classes[0] % modulus;
    Ok(x % 2 == 1 && classes.iter().all(|&w| w % modulus == x))
}

pub fn harborth_formula(group: &GroupSpec, weights: &WeightSet) -> FormulaValue {
    if weights.check_group(group).is_err() {
        return FormulaValue::not_applicable("weights do not match the group exponent");
    }
    let exp = group.exponent() as usize;
    if weights.is_trivial() {
        return FormulaValue::point(exp, "trivial-weights");
    }
    if group.is_elementary_2() {
        return FormulaValue::point(group.order() + 1, "elementary-2-group");
    }
    if group.is_cyclic() {
        let plus_one = gw_equals_order_plus_one(group, weights).unwrap_or(false);
        return FormulaValue::point(group.order() + usize::from(plus_one), "cyclic-weighted-harborth");
    }
    if let Some(n) = group.c2_c2n_half() {
        let n = n as usize;
        if weights.is_plus_minus() {
            let v = if n <= 2 { 5 } else { 2 * n + 2 };
            return FormulaValue::point(v, "c2-c2n-harborth-pm");
        }
        if weights.is_classic() {
            let v = if n % 2 == 1 { 2 * n + 3 } else { 2 * n + 2 };
            return FormulaValue::point(v, "c2-c2n-harborth-classic");
        }
        return FormulaValue::not_applicable("C2+C2n is covered for plus-minus and classical weights only");
    }
    FormulaValue::not_applicable(format!("no closed form for the Harborth constant of {}", group.name()))
}

/// Plus-minus EGZ constant for cyclic groups and `C2 + C2n`.
pub fn egz_pm_formula(group: &GroupSpec) -> FormulaValue {
    let exp = group.exponent() as usize;
    if group.is_cyclic() && group.order() > 1 {
        return FormulaValue::point(exp + log2_floor(exp), "cyclic-egz-pm");
    }
    match group.c2_c2n_half() {
        Some(1) => FormulaValue::point(5, "c2x2-egz-pm"),
        Some(n) => {
            let two_n = 2 * n as usize;
            FormulaValue::point(two_n + log2_floor(two_n) + 1, "c2-c2n-egz-pm")
        }
        None => FormulaValue::not_applicable(format!("no closed form for s_pm({})", group.name())),
    }
}

/// `[sum floor(log2 n_i) + 1, floor(log2 |G|) + 1]` for the plus-minus
/// Davenport constant; a point when the ends meet.
pub fn davenport_pm_bounds(group: &GroupSpec) -> FormulaValue {
    let lo = group.factors().iter().map(|&n| log2_floor(n as usize)).sum::<usize>() + 1;
    let hi = log2_floor(group.order()) + 1;
    FormulaValue::interval(lo, hi, "davenport-pm-log-bounds")
}

/// Plus-minus eta constant of `C_{2^l} + C_{2^l n}` with `2^l n >= 4`, and of `C2 + C2`.
pub fn eta_pm_formula(group: &GroupSpec) -> FormulaValue {
    if let [a, b] = *group.factors() {
        if a.is_power_of_two() {
            let l = a.trailing_zeros() as usize;
            let n = (b / a) as usize;
            if b >= 4 {
                return FormulaValue::point(log2_floor(n) + 2 * l + 1, "eta-pm-2power-family");
            }
            if a == 2 && b == 2 {
                return FormulaValue::point(4, "c2x2-eta-pm");
            }
        }
    }
    FormulaValue::not_applicable(format!("no closed form for eta_pm({})", group.name()))
}

/// Critical number of an even-order group other than `C2`.
pub fn critical_formula(group: &GroupSpec) -> FormulaValue {
    let order = group.order();
    if order % 2 == 1 || order == 2 {
        return FormulaValue::not_applicable("covered for even order other than 2 only");
    }
    let exceptional: [&[u32]; 5] = [&[2, 2], &[4], &[6], &[2, 4], &[8]];
    if exceptional.contains(&group.factors()) {
        FormulaValue::point(1 + order / 2, "critical-even-order")
    } else {
        FormulaValue::point(order / 2, "critical-even-order")
    }
}

/// The formula that applies to a computed constant, if any.
pub fn formula_for(kind: ConstantKind, group: &GroupSpec, weights: &WeightSet) -> FormulaValue {
    let exp = group.exponent() as usize;
    match kind {
        ConstantKind::Harborth => harborth_formula(group, weights),
        ConstantKind::Critical => critical_formula(group),
        _ if weights.is_trivial() => {
            let v = if kind == ConstantKind::Egz { exp } else { 1 };
            FormulaValue::point(v, "trivial-weights")
        }
        _ if !weights.is_plus_minus() => FormulaValue::not_applicable("covered for plus-minus weights only"),
        ConstantKind::Egz => egz_pm_formula(group),
        ConstantKind::Davenport => davenport_pm_bounds(group),
        ConstantKind::Eta => eta_pm_formula(group),
    }
}
