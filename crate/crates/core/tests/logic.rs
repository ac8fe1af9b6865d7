mod common;

use std::collections::BTreeSet;

use ccsv_core::ast::{Formula, GroundLabel, LabelPattern, Value};
use ccsv_core::equivalence::bounded_traces;
use ccsv_core::logic::{check, diamond_witness, sat_states, sat_states_with_stats, StateSet};
use ccsv_core::parser::{parse_formula, parse_model};
use ccsv_core::semantics::{build_lts, ExploreLimits, Lts};
use ccsv_core::CheckError;
use common::{build, rng, ROOT};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

fn labels() -> Vec<GroundLabel> {
    vec![
        GroundLabel::Tau,
        GroundLabel::input("a", vec![]),
        GroundLabel::output("a", vec![]),
        GroundLabel::input("b", vec![Value::Zero]),
        GroundLabel::input("b", vec![Value::One]),
    ]
}

/// A random graph over a small label set; with `taus` false it has no
/// internal steps.
fn graph(r: &mut StdRng, taus: bool) -> Lts {
    let n = r.random_range(1..=8);
    let ls = labels();
    let from = usize::from(!taus);
    let edges = (0..r.random_range(0..=3 * n))
        .map(|_| {
            (
                r.random_range(0..n),
                ls[r.random_range(from..ls.len())].clone(),
                r.random_range(0..n),
            )
        })
        .collect();
    Lts::from_edges(n, 0, edges)
}

fn pattern(r: &mut StdRng) -> LabelPattern {
    match r.random_range(0..4) {
        0 => LabelPattern::Tau,
        1 => LabelPattern::AnyVisible,
        _ => LabelPattern::Exact(labels()[r.random_range(1..5)].clone()),
    }
}

fn strengthen(f: &Formula) -> Formula {
    let b = |g: &Formula| Box::new(strengthen(g));
    match f {
        Formula::DiamondWeak(p, g) => Formula::DiamondStrong(p.clone(), b(g)),
        Formula::BoxWeak(p, g) => Formula::BoxStrong(p.clone(), b(g)),
        Formula::DiamondStrong(p, g) => Formula::DiamondStrong(p.clone(), b(g)),
        Formula::BoxStrong(p, g) => Formula::BoxStrong(p.clone(), b(g)),
        Formula::And(x, y) => Formula::And(b(x), b(y)),
        Formula::Or(x, y) => Formula::Or(b(x), b(y)),
        Formula::Mu(v, g) => Formula::Mu(v.clone(), b(g)),
        Formula::Nu(v, g) => Formula::Nu(v.clone(), b(g)),
        other => other.clone(),
    }
}

/// States from which some path reaches a state with an outgoing `target`.
fn can_reach(lts: &Lts, target: &GroundLabel) -> BTreeSet<usize> {
    let mut good: BTreeSet<usize> = (0..lts.num_states())
        .filter(|&s| lts.outgoing(s).iter().any(|t| &t.label == target))
        .collect();
    loop {
        let more: Vec<usize> = lts
            .transitions()
            .iter()
            .filter(|t| good.contains(&t.target))
            .map(|t| t.source)
            .collect();
        let before = good.len();
        good.extend(more);
        if good.len() == before {
            return good;
        }
    }
}

fn set(s: &StateSet) -> BTreeSet<usize> {
    s.iter().collect()
}

#[test]
fn bb84_property() {
    let m = common::bb84();
    let f = parse_formula("<<choose(0)>><<'keep(1)>>tt").unwrap();
    assert!(!check(&build(&m, "BB84"), &f).unwrap());
    assert!(!check(&build(&m, "Spec"), &f).unwrap());
    let attacked = build(&m, "BB84p");
    assert!(check(&attacked, &f).unwrap());
    let w = diamond_witness(&attacked, &f).unwrap().unwrap();
    assert_eq!(
        w,
        vec![
            GroundLabel::input("choose", vec![Value::Zero]),
            GroundLabel::output("keep", vec![Value::One])
        ]
    );
    assert_eq!(diamond_witness(&build(&m, "BB84"), &f).unwrap(), None);
}

#[test]
fn weak_tau_needs_a_step() {
    let stuck = Lts::from_edges(1, 0, vec![]);
    assert!(!check(&stuck, &parse_formula("<<tau>>tt").unwrap()).unwrap());
    assert!(check(&stuck, &parse_formula("[[tau]]ff").unwrap()).unwrap());
    let step = Lts::from_edges(2, 0, vec![(0, GroundLabel::Tau, 1)]);
    assert!(check(&step, &parse_formula("<<tau>>tt").unwrap()).unwrap());
}

#[test]
fn fixpoints_on_a_cycle() {
    let m = parse_model("P = a . 'b . P").unwrap();
    let lts = build(&m, "P");
    // always eventually able to do a
    assert!(check(
        &lts,
        &parse_formula("max X . [-]X && (<a>tt || <-><a>tt)").unwrap()
    )
    .unwrap());
    // a never-ending run exists
    assert!(check(&lts, &parse_formula("max X . <->X").unwrap()).unwrap());
    assert!(!check(&lts, &parse_formula("min X . <->X").unwrap()).unwrap());
}

#[test]
fn errors() {
    let lts = Lts::from_edges(1, 0, vec![]);
    assert!(matches!(
        check(&lts, &Formula::Var("X".into())),
        Err(CheckError::OpenFormula(_))
    ));
    assert!(matches!(
        diamond_witness(&lts, &parse_formula("[a]tt").unwrap()),
        Err(CheckError::NotExistential)
    ));
    let m = parse_model("C = up . (C | 'tick . 0)").unwrap();
    let cut = build_lts(&m, "C", &ExploreLimits::with_max_states(4)).unwrap();
    assert!(matches!(
        check(&cut, &Formula::Tt),
        Err(CheckError::Truncated)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dual_is_complement(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lts = graph(&mut r, true);
        let f = common::formula(&mut r, 5);
        let sat = sat_states(&lts, &f).unwrap();
        prop_assert_eq!(sat_states(&lts, &f.dual()).unwrap(), sat.complement());
    }

    #[test]
    fn box_is_not_diamond_not(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lts = graph(&mut r, true);
        let p = pattern(&mut r);
        let all = StateSet::full(lts.num_states());
        let sat = |f| sat_states(&lts, &f).unwrap();
        prop_assert_eq!(sat(Formula::boxed(p.clone(), Formula::Ff)), sat(Formula::diamond(p.clone(), Formula::Tt)).complement());
        prop_assert_eq!(sat(Formula::weak_box(p.clone(), Formula::Ff)), sat(Formula::weak_diamond(p.clone(), Formula::Tt)).complement());
        prop_assert_eq!(sat(Formula::boxed(p.clone(), Formula::Tt)), all.clone());
        prop_assert_eq!(sat(Formula::weak_box(p, Formula::Tt)), all);
    }

    #[test]
    fn strong_diamond_implies_weak(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lts = graph(&mut r, true);
        let p = pattern(&mut r);
        let g = common::formula(&mut r, 3);
        let strong = sat_states(&lts, &Formula::diamond(p.clone(), g.clone())).unwrap();
        let weak = sat_states(&lts, &Formula::weak_diamond(p.clone(), g.clone())).unwrap();
        prop_assert!(strong.is_subset(&weak));
        let strong = sat_states(&lts, &Formula::boxed(p.clone(), g.clone())).unwrap();
        let weak = sat_states(&lts, &Formula::weak_box(p, g)).unwrap();
        prop_assert!(weak.is_subset(&strong));
    }

    #[test]
    fn weak_equals_strong_without_tau(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lts = graph(&mut r, false);
        let f = common::formula(&mut r, 5);
        prop_assert_eq!(sat_states(&lts, &f).unwrap(), sat_states(&lts, &strengthen(&f)).unwrap());
    }

    #[test]
    fn fixpoints_converge_within_state_count(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lts = graph(&mut r, true);
        let f = common::formula(&mut r, 6);
        let (_, stats) = sat_states_with_stats(&lts, &f).unwrap();
        prop_assert!(stats.max_fixpoint_rounds <= lts.num_states() + 1);
    }

    #[test]
    fn least_fixpoint_is_reachability(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lts = graph(&mut r, true);
        let target = labels()[r.random_range(1..5)].clone();
        let f = Formula::mu("X", Formula::or(
            Formula::diamond(LabelPattern::Exact(target.clone()), Formula::Tt),
            Formula::or(
                Formula::diamond(LabelPattern::AnyVisible, Formula::Var("X".into())),
                Formula::diamond(LabelPattern::Tau, Formula::Var("X".into())),
            ),
        ));
        prop_assert_eq!(set(&sat_states(&lts, &f).unwrap()), can_reach(&lts, &target));
    }

    #[test]
    fn weak_trace_formulas_match_traces(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = common::explorable_model(&mut r);
        let lts = build(&m, ROOT);
        let known: Vec<_> = bounded_traces(&lts, 3).into_iter().collect();
        let alphabet = common::alphabet(&lts);
        for _ in 0..8 {
            let w = if alphabet.is_empty() || r.random_bool(0.5) {
                known[r.random_range(0..known.len())].clone()
            } else {
                (0..r.random_range(1..4)).map(|_| alphabet[r.random_range(0..alphabet.len())].clone()).collect()
            };
            let f = Formula::weak_trace(&w);
            let member = bounded_traces(&lts, w.len()).contains(&w);
            prop_assert_eq!(check(&lts, &f).unwrap(), member);
            let witness = diamond_witness(&lts, &f).unwrap();
            prop_assert_eq!(witness, member.then(|| w.clone()));
        }
    }
}
