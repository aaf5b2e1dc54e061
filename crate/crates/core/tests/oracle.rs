mod common;

use common::{groups_of_order, plus_minus, Oracle};
use zerosum::{ConstantKind, Engine, GroupSpec, SearchOptions, WeightSet};

fn engine(threads: usize, orbit_pruning: bool) -> Engine {
    Engine::new(SearchOptions { threads, orbit_pruning, ..Default::default() }).unwrap()
}

fn small_groups(max_order: u32) -> Vec<Vec<u32>> {
    (2..=max_order).flat_map(groups_of_order).collect()
}

#[test]
fn constants_match_the_oracle() {
    let e = engine(2, false);
    for factors in small_groups(8) {
        let group = GroupSpec::new(&factors).unwrap();
        let oracle = Oracle::new(&factors);
        let exp = group.exponent();
        for (label, w) in [("pm", WeightSet::plus_minus(exp)), ("classic", WeightSet::classic(exp))] {
            for kind in [ConstantKind::Davenport, ConstantKind::Eta, ConstantKind::Egz, ConstantKind::Harborth] {
                let got = e.compute(kind, &group, &w).unwrap().value;
                let want = oracle.constant(kind.as_str(), w.classes());
                assert_eq!(got, want, "{kind} {factors:?} {label}");
            }
        }
        if group.order() >= 3 {
            let got = e.critical_number(&group).unwrap().value;
            assert_eq!(got, oracle.constant("critical", &[1]), "critical {factors:?}");
        }
    }
}

#[test]
fn odd_weight_sets_match_the_oracle() {
    let e = engine(1, false);
    for factors in [vec![5], vec![6], vec![8], vec![9], vec![2, 4], vec![3, 3]] {
        let group = GroupSpec::new(&factors).unwrap();
        let oracle = Oracle::new(&factors);
        let exp = group.exponent() as i64;
        for ws in [vec![2], vec![1, 2], vec![2, 3], vec![1, 3]] {
            if ws.iter().any(|&w| w >= exp) {
                continue;
            }
            let w = WeightSet::new(&ws, exp as u32).unwrap();
            for kind in [ConstantKind::Davenport, ConstantKind::Egz, ConstantKind::Harborth] {
                // the multiset oracle is exponential in the EGZ length
                if kind == ConstantKind::Egz && group.order() > 6 {
                    continue;
                }
                let got = e.compute(kind, &group, &w).unwrap().value;
                assert_eq!(got, oracle.constant(kind.as_str(), w.classes()), "{kind} {factors:?} {ws:?}");
            }
        }
    }
}

#[test]
fn witnesses_fail_under_the_oracle() {
    let e = engine(1, false);
    for factors in [vec![2, 4], vec![2, 6], vec![10], vec![2, 2, 2]] {
        let group = GroupSpec::new(&factors).unwrap();
        let oracle = Oracle::new(&factors);
        let w = WeightSet::plus_minus(group.exponent());
        for kind in ConstantKind::ALL {
            let r = e.compute(kind, &group, &w).unwrap();
            let witness = r.witness.unwrap();
            let coords: Vec<Vec<u32>> =
                witness.terms().iter().map(|t| t.coords().iter().map(|&c| c as u32).collect()).collect();
            let ws = if kind == ConstantKind::Critical { vec![1] } else { plus_minus(group.exponent()) };
            assert!(oracle.fails(kind.as_str(), &coords, &ws), "{kind} {factors:?} {witness}");
        }
    }
}

#[test]
fn orbit_pruning_and_threads_agree_with_plain_search() {
    let plain = engine(1, false);
    let pruned = engine(1, true);
    let pruned_many = engine(4, true);
    for factors in small_groups(16) {
        let group = GroupSpec::new(&factors).unwrap();
        let w = WeightSet::plus_minus(group.exponent());
        for kind in ConstantKind::ALL {
            if kind == ConstantKind::Critical && group.order() < 3 {
                continue;
            }
            if kind == ConstantKind::Egz && group.order() > 12 {
                continue;
            }
            let a = plain.compute(kind, &group, &w).unwrap();
            let b = pruned.compute(kind, &group, &w).unwrap();
            let c = pruned_many.compute(kind, &group, &w).unwrap();
            assert_eq!(a.value, b.value, "{kind} {factors:?}");
            assert_eq!(b.witness, c.witness, "{kind} {factors:?}");
            assert_eq!(b.nodes_visited, c.nodes_visited, "{kind} {factors:?}");
        }
    }
}

#[test]
fn ceiling_is_enforced() {
    assert!(GroupSpec::parse("2,2,2,2,2,2").is_ok());
    assert!(GroupSpec::parse("130").is_err());
    assert!(GroupSpec::parse_with_ceiling("2,8", 8).is_err());
}
