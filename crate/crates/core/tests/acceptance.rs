//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs under `cargo test` with its own harness.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::{groups_of_order, plus_minus, Oracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zerosum::formulas::{
    critical_formula, davenport_pm_bounds, egz_pm_formula, eta_pm_formula, gw_equals_order_plus_one, harborth_formula,
};
use zerosum::inverse::{enumerate_extremal, lemma_proj_full_check, verify_characterization, TheoremId};
use zerosum::sequence::{has_weighted_zero_of_length, subsums_sigma0, weighted_sums};
use zerosum::{ConstantKind, Engine, GroupSpec, SearchOptions, SearchReport, Sequence, WeightSet};

type Outcome = Result<String, String>;

struct Ctx {
    plain: Engine,
    pruned: Engine,
    /// JSON of every report produced, in order, for the determinism check.
    log: Vec<String>,
    /// (group, weights) -> (s_W, D_W) where computed.
    ags: BTreeMap<(String, String), (Option<usize>, Option<usize>)>,
}

impl Ctx {
    fn new(threads: usize) -> Self {
        let opts = SearchOptions { threads, ..Default::default() };
        Self {
            plain: Engine::new(opts.clone()).unwrap(),
            pruned: Engine::new(SearchOptions { orbit_pruning: true, ..opts }).unwrap(),
            log: Vec::new(),
            ags: BTreeMap::new(),
        }
    }

    fn compute(&mut self, kind: ConstantKind, group: &GroupSpec, w: &WeightSet, pruned: bool) -> Result<SearchReport, String> {
        let engine = if pruned { &self.pruned } else { &self.plain };
        let r = engine.compute(kind, group, w).map_err(|e| format!("{kind} {}: {e}", group.name()))?;
        self.log.push(serde_json::to_string(&r.to_json(false)).unwrap());
        let entry = self.ags.entry((group.to_string(), w.to_string())).or_default();
        match kind {
            ConstantKind::Egz => entry.0 = Some(r.value),
            ConstantKind::Davenport => entry.1 = Some(r.value),
            _ => {}
        }
        Ok(r)
    }
}

fn c2c2n(n: u32) -> GroupSpec {
    GroupSpec::new(&[2, 2 * n]).unwrap()
}

fn expect_eq(what: String, got: usize, want: usize) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {t:?}, limit {limit:?}"))
    }
}

fn harborth_values(ctx: &mut Ctx, classic: bool, want: [usize; 5]) -> Outcome {
    let start = Instant::now();
    let mut got = Vec::new();
    for n in 1..=5 {
        let g = c2c2n(n);
        let w = if classic { WeightSet::classic(2 * n) } else { WeightSet::plus_minus(2 * n) };
        let v = ctx.compute(ConstantKind::Harborth, &g, &w, false)?.value;
        expect_eq(format!("g({})", g.name()), v, want[n as usize - 1])?;
        got.push(v);
    }
    within(Duration::from_secs(60), start, "harborth values")?;
    Ok(format!("values {got:?}"))
}

fn cyclic_grid() -> Vec<(GroupSpec, WeightSet)> {
    let mut out = Vec::new();
    for n in 2..=12u32 {
        let g = GroupSpec::cyclic(n).unwrap();
        for a in 1..n as i64 {
            out.push((g.clone(), WeightSet::new(&[a], n).unwrap()));
            for b in a + 1..n as i64 {
                out.push((g.clone(), WeightSet::new(&[a, b], n).unwrap()));
            }
        }
    }
    out
}

fn criterion_3(ctx: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let grid = cyclic_grid();
    for (g, w) in &grid {
        let v = ctx.compute(ConstantKind::Harborth, g, w, false)?.value;
        let f = harborth_formula(g, w).point_value().ok_or_else(|| format!("no formula for {} W={w}", g.name()))?;
        expect_eq(format!("g_W({}) W={w}", g.name()), v, f)?;
    }
    within(Duration::from_secs(600), start, "cyclic grid")?;
    Ok(format!("{} (n, W) pairs", grid.len()))
}

fn criterion_4(ctx: &mut Ctx) -> Outcome {
    let mut cases = cyclic_grid();
    for k in 1..=4 {
        let g = GroupSpec::new(&vec![2; k]).unwrap();
        cases.push((g, WeightSet::classic(2)));
    }
    let mut plus_one = 0;
    for (g, w) in &cases {
        let v = ctx.compute(ConstantKind::Harborth, g, w, false)?.value;
        let predicted = gw_equals_order_plus_one(g, w).map_err(|e| e.to_string())?;
        if (v == g.order() + 1) != predicted {
            return Err(format!("{} W={w}: value {v}, predicted |G|+1 = {predicted}", g.name()));
        }
        plus_one += usize::from(predicted);
    }
    Ok(format!("{} pairs, {plus_one} with g_W = |G|+1", cases.len()))
}

fn criterion_5(ctx: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let g = c2c2n(2);
    let v = ctx.compute(ConstantKind::Egz, &g, &WeightSet::plus_minus(4), false)?.value;
    expect_eq("s(C2+C4)".into(), v, 7)?;
    within(Duration::from_secs(1), start, "s(C2+C4)")?;
    let start = Instant::now();
    let g = c2c2n(3);
    let v = ctx.compute(ConstantKind::Egz, &g, &WeightSet::plus_minus(6), true)?.value;
    expect_eq("s(C2+C6)".into(), v, 9)?;
    within(Duration::from_secs(600), start, "s(C2+C6)")?;
    let g = c2c2n(1);
    let v = ctx.compute(ConstantKind::Egz, &g, &WeightSet::plus_minus(2), false)?.value;
    expect_eq("s(C2+C2)".into(), v, 5)?;
    for n in 1..=3 {
        let g = c2c2n(n);
        let f = egz_pm_formula(&g).point_value().unwrap();
        let v = ctx.compute(ConstantKind::Egz, &g, &WeightSet::plus_minus(2 * n), n == 3)?.value;
        expect_eq(format!("s formula {}", g.name()), v, f)?;
    }
    Ok("s_pm = 5, 7, 9 for n = 1, 2, 3".into())
}

fn criterion_6(ctx: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let mut got = Vec::new();
    for n in 1..=6 {
        let g = c2c2n(n);
        let w = WeightSet::plus_minus(2 * n);
        let d = ctx.compute(ConstantKind::Davenport, &g, &w, false)?.value;
        let fd = davenport_pm_bounds(&g).point_value().ok_or_else(|| format!("bounds for {} are not a point", g.name()))?;
        expect_eq(format!("D({})", g.name()), d, fd)?;
        let e = ctx.compute(ConstantKind::Eta, &g, &w, false)?.value;
        let fe = eta_pm_formula(&g).point_value().ok_or_else(|| format!("no eta formula for {}", g.name()))?;
        expect_eq(format!("eta({})", g.name()), e, fe)?;
        got.push((d, e));
    }
    within(Duration::from_secs(60), start, "davenport/eta")?;
    Ok(format!("(D, eta) = {got:?}"))
}

fn criterion_7(ctx: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for order in (4..=16).step_by(2) {
        for factors in groups_of_order(order) {
            let g = GroupSpec::new(&factors).unwrap();
            let v = ctx.compute(ConstantKind::Critical, &g, &WeightSet::classic(g.exponent()), false)?.value;
            let f = critical_formula(&g).point_value().unwrap();
            expect_eq(format!("cr({})", g.name()), v, f)?;
            count += 1;
        }
    }
    within(Duration::from_secs(300), start, "critical numbers")?;
    Ok(format!("{count} groups"))
}

fn criterion_8(ctx: &mut Ctx) -> Outcome {
    let mut cases = vec![(c2c2n(2), TheoremId::C2c4Pm)];
    cases.extend([3, 4, 5].map(|n| (c2c2n(n), TheoremId::PmGeneral)));
    cases.push((c2c2n(4), TheoremId::UnweightedEven));
    cases.extend([3, 5].map(|n| (c2c2n(n), TheoremId::UnweightedOdd)));
    let mut sizes = Vec::new();
    for (g, t) in cases {
        let start = Instant::now();
        let r = verify_characterization(&ctx.plain, &g, t, None).map_err(|e| format!("{t} {}: {e}", g.name()))?;
        ctx.log.push(serde_json::to_string(&r.to_json()).unwrap());
        if !r.holds() {
            return Err(format!("{t} {}: {} sequences differ", g.name(), r.symmetric_difference.len()));
        }
        if r.census_count == 0 {
            return Err(format!("{t} {}: empty census", g.name()));
        }
        within(Duration::from_secs(900), start, t.as_str())?;
        sizes.push(format!("{t} {}: {}", g.name(), r.census_count));
    }
    Ok(format!("census sizes {}", sizes.join(", ")))
}

fn criterion_9(ctx: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let n = 4i64;
    let g = c2c2n(n as u32);
    let oracle = Oracle::new(&[2, 2 * n as u32]);
    let classic = WeightSet::classic(8);
    let pm = WeightSet::plus_minus(8);
    let mut checked = 0;
    for alpha in 0..2 * n {
        let mut first: Vec<[i64; 2]> = (0..2 * n).map(|i| [1, i]).collect();
        first.push([0, alpha]);
        let mut second: Vec<[i64; 2]> = (0..2 * n).map(|i| [0, i]).collect();
        second.push([1, alpha]);
        for family in [first, second] {
            let elems: Vec<_> = family.iter().map(|c| g.element(c).unwrap()).collect();
            let s = Sequence::from_elements(&g, &elems).unwrap();
            let coords: Vec<Vec<u32>> = family.iter().map(|c| vec![c[0] as u32, c[1] as u32]).collect();
            let plain_zero = has_weighted_zero_of_length(&s, &classic, 8).unwrap();
            let pm_zero = has_weighted_zero_of_length(&s, &pm, 8).unwrap();
            let oracle_plain = oracle.has_zero_subsum(&coords, &[1], |l| l == 8);
            let oracle_pm = oracle.has_zero_subsum(&coords, &plus_minus(8), |l| l == 8);
            ctx.log.push(format!("{s} {plain_zero} {pm_zero}"));
            if plain_zero || oracle_plain {
                return Err(format!("{s} has a zero-sum subsequence of length 8"));
            }
            if !pm_zero || !oracle_pm {
                return Err(format!("{s} has no plus-minus zero-subsum of length 8"));
            }
            checked += 1;
        }
    }
    within(Duration::from_secs(60), start, "example families")?;
    Ok(format!("{checked} sequences"))
}

fn criterion_10(ctx: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    // plus-minus weighted sums of the whole sequence against -sigma + 2 Sigma0
    for factors in [vec![2, 4], vec![2, 6], vec![5], vec![7]] {
        let g = GroupSpec::new(&factors).unwrap();
        let oracle = Oracle::new(&factors);
        let pm = WeightSet::plus_minus(g.exponent());
        for trial in 0..10_000 {
            let len = rng.gen_range(0..=10);
            let idx: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g.order())).collect();
            let s = Sequence::from_indices(&g, &idx).unwrap();
            let lhs = weighted_sums(&s, &pm).unwrap();
            let minus_sigma = g.neg(&s.sigma()).unwrap();
            let rhs = subsums_sigma0(&s).dilate(2).translate(&minus_sigma).unwrap();
            if lhs != rhs {
                return Err(format!("sigma_pm identity fails for {s}"));
            }
            if trial < 300 {
                let coords: Vec<Vec<u32>> =
                    s.terms().iter().map(|t| t.coords().iter().map(|&c| c as u32).collect()).collect();
                let refs: Vec<&Vec<u32>> = coords.iter().collect();
                let sums = oracle.weighted_sums(&refs, &plus_minus(g.exponent()));
                if sums.len() != lhs.len() {
                    return Err(format!("oracle disagrees on sigma_pm of {s}"));
                }
            }
        }
    }

    // every sequence of length floor(log2 |G|) + 1 has a plus-minus zero-subsum
    let mut groups = 0;
    for order in 2..=16u32 {
        for factors in groups_of_order(order) {
            let oracle = Oracle::new(&factors);
            let l = (31 - order.leading_zeros()) as usize + 1;
            let w = plus_minus(oracle.exponent());
            for sel in oracle.selections(l, false) {
                let seq: Vec<Vec<u32>> = sel.iter().map(|&i| oracle.elements[i].clone()).collect();
                if !oracle.has_zero_subsum(&seq, &w, |_| true) {
                    return Err(format!("{factors:?}: {seq:?} of length {l} has no plus-minus zero-subsum"));
                }
            }
            groups += 1;
        }
    }

    // the doubled subsum lemma on extremal plus-minus sets
    let mut members = 0;
    for n in [3, 4] {
        let g = c2c2n(n);
        let census = enumerate_extremal(&ctx.plain, &g, &WeightSet::plus_minus(2 * n), ConstantKind::Harborth)
            .map_err(|e| e.to_string())?;
        for s in census.to_sequences() {
            if !lemma_proj_full_check(&s).map_err(|e| e.to_string())? {
                return Err(format!("doubled subsums of {s} miss 2G"));
            }
            members += 1;
        }
    }

    // s_W >= exp + D_W - 1 wherever both were computed
    for spec in ["3", "4", "5", "6", "7", "8", "9", "10", "2,2", "2,4", "2,6", "2,8", "3,3"] {
        let g = GroupSpec::parse(spec).unwrap();
        for w in [WeightSet::plus_minus(g.exponent()), WeightSet::classic(g.exponent())] {
            ctx.compute(ConstantKind::Egz, &g, &w, false)?;
            ctx.compute(ConstantKind::Davenport, &g, &w, false)?;
        }
    }
    let mut pairs = 0;
    for ((group, w), (s, d)) in &ctx.ags {
        if let (Some(s), Some(d)) = (s, d) {
            let exp = GroupSpec::parse(group).unwrap().exponent() as usize;
            if *s + 1 < exp + d {
                return Err(format!("s < exp + D - 1 for {group} W={w}"));
            }
            pairs += 1;
        }
    }
    if pairs == 0 {
        return Err("no (G, W) pair with both s_W and D_W".into());
    }
    Ok(format!("4 x 10^4 random identities, {groups} groups exhaustive, {members} census members, {pairs} AGS pairs"))
}

type Criterion = (&'static str, fn(&mut Ctx) -> Outcome);

fn criteria() -> Vec<Criterion> {
    vec![
        ("Harborth plus-minus values of C2+C2n", |c| harborth_values(c, false, [5, 5, 8, 10, 12])),
        ("Harborth classical values of C2+C2n", |c| harborth_values(c, true, [5, 6, 9, 10, 13])),
        ("cyclic Harborth formula", criterion_3),
        ("|G|+1 boundary", criterion_4),
        ("plus-minus EGZ constant", criterion_5),
        ("plus-minus Davenport and eta constants", criterion_6),
        ("critical number", criterion_7),
        ("inverse characterizations", criterion_8),
        ("example families", criterion_9),
        ("property suites", criterion_10),
    ]
}

fn main() {
    let mut failed = 0;
    let mut report = |id: usize, title: &str, outcome: &Outcome, took: Duration| {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(e) => {
                failed += 1;
                ("FAIL", e.as_str())
            }
        };
        println!("criterion {id:>2} {tag} {title}: {detail} ({:.1}s)", took.as_secs_f64());
    };

    let all = criteria();
    let mut ctx = Ctx::new(1);
    let mut first_nine = Vec::new();
    for (i, (title, run)) in all.iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut ctx);
        report(i + 1, title, &outcome, start.elapsed());
        if i == 8 {
            first_nine = std::mem::take(&mut ctx.log);
        }
    }

    let start = Instant::now();
    let mut many = Ctx::new(8);
    let mut rerun = Ok(());
    for (title, run) in &all[..9] {
        if let Err(e) = run(&mut many) {
            rerun = Err(format!("{title} failed with 8 threads: {e}"));
            break;
        }
    }
    let outcome = rerun.and_then(|()| {
        if many.log == first_nine {
            Ok(format!("{} reports byte-identical with 1 and 8 threads", first_nine.len()))
        } else {
            let at = many.log.iter().zip(&first_nine).position(|(a, b)| a != b).unwrap_or(first_nine.len().min(many.log.len()));
            Err(format!("report {at} differs between 1 and 8 threads"))
        }
    });
    report(11, "determinism across thread counts", &outcome, start.elapsed());

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
