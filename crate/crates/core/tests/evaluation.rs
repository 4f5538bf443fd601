//! Three-valued body truth, derivability of comparisons and one-step
//! inference.

mod common;

use std::collections::BTreeSet;

use common::{analyzed, id, with_truth};
use foundalog::ast::{AggOp, CmpOp, Pred};
use foundalog::eval::{cmp_truth, derivable, one_step, truth_of_body, Interpretation, Truth};
use foundalog::ground::{AtomId, GroundCmp, GroundLit, GroundSet, TupleGroup};
use foundalog::oracle::{aggregate_2valued, compare_value, derivable_from_sets, AggValue};
use foundalog::value::Constant;
use proptest::prelude::*;

fn set_of(values: &[Constant]) -> GroundSet {
    GroundSet {
        groups: values
            .iter()
            .enumerate()
            .map(|(i, v)| TupleGroup { tuple: vec![v.clone()], witnesses: vec![vec![GroundLit { atom: i as AtomId, positive: true }]] })
            .collect(),
    }
}

fn interp(truths: &[Truth]) -> Interpretation {
    let mut i = Interpretation::with_len(truths.len());
    for (a, t) in truths.iter().enumerate() {
        if *t != Truth::UD {
            i.insert(GroundLit { atom: a as AtomId, positive: *t == Truth::T }).unwrap();
        }
    }
    i
}

fn cmp(agg: AggOp, op: CmpOp, k: i64) -> GroundCmp {
    GroundCmp { agg, set: 0, op, rhs: Constant::int(k) }
}

#[test]
fn literal_truth() {
    let a = analyzed("p(1). q :- p(1).");
    let f = a.founded().unwrap();
    let q = a.ground_original.rules.iter().find(|r| r.head.atom == id(&a, "q")).unwrap();
    assert_eq!(truth_of_body(&q.body, &a.ground_original, &f), Truth::T);
}

#[test]
fn self_count_comparison_is_undefined_initially() {
    let a = analyzed("p('a') :- count {X: p(X)} = 1.\nother('b').");
    let rule = a.ground_original.rules.iter().find(|r| r.head.atom == id(&a, "p('a')")).unwrap();
    assert_eq!(truth_of_body(&rule.body, &a.ground_original, &Interpretation::empty(&a.universe)), Truth::UD);
}

#[test]
fn graduate_body_for_john_is_false() {
    let a = analyzed(
        "taken('mike','cs1'). taken('mike','cs2'). taken('john','cs2'). required('cs1'). required('cs2').
         ready(S) :- each C | not required(C) or taken(S, C).",
    );
    let f = a.founded().unwrap();
    let rule = a.ground_original.rules.iter().find(|r| r.head.atom == id(&a, "ready('john')")).unwrap();
    assert_eq!(truth_of_body(&rule.body, &a.ground_original, &f), Truth::F);
}

#[test]
fn derivability_examples() {
    let s = set_of(&[1, 2, 3].map(Constant::int));
    let i = interp(&[Truth::T, Truth::UD, Truth::UD]);
    assert!(!derivable(&cmp(AggOp::Count, CmpOp::Ge, 2), &s, &i));
    assert!(!derivable(&cmp(AggOp::Count, CmpOp::Lt, 2), &s, &i));

    assert!(derivable(&cmp(AggOp::Count, CmpOp::Eq, 0), &GroundSet::default(), &Interpretation::with_len(0)));

    let s = set_of(&[3, -2, 4].map(Constant::int));
    let i = interp(&[Truth::T, Truth::UD, Truth::UD]);
    assert!(!derivable(&cmp(AggOp::Sum, CmpOp::Le, 5), &s, &i));
    assert!(derivable(&cmp(AggOp::Sum, CmpOp::Ge, 1), &s, &i));

    let s = set_of(&[Constant::int(2), Constant::sym("a")]);
    assert!(!derivable(&cmp(AggOp::Max, CmpOp::Eq, 2), &s, &interp(&[Truth::T, Truth::T])));
}

/// The sum examples above, checked by trying every 2-valued completion.
#[test]
fn sum_examples_agree_with_completions() {
    // 3 is true; -2 and 4 are undefined.
    let sums: Vec<i64> = (0..4u32).map(|m| 3 + if m & 1 == 1 { -2 } else { 0 } + if m & 2 == 2 { 4 } else { 0 }).collect();
    assert!(sums.iter().any(|s| *s > 5), "sum <= 5 is not forced");
    assert!(sums.iter().all(|s| *s >= 1), "sum >= 1 is forced");
}

#[test]
fn one_step_examples() {
    let a = analyzed("p(1). p(3) :- count {X: p(X)} >= 2. p(2) :- count {X: p(X)} >= 2.");
    let g = &a.ground_completed;
    let first = one_step(g, &g.rules, &Interpretation::empty(&a.universe)).unwrap();
    assert_eq!(with_truth(&a, &first, Truth::T), common::set(&["p(1)"]));
    let second = one_step(g, &g.rules, &first).unwrap();
    assert_eq!(with_truth(&a, &second, Truth::T), common::set(&["p(1)"]));

    let c = analyzed(
        "input('w1','g1'). input('w2','g1'). input('w0','g2'). output('w0','g1'). output('w3','g2').
         gate('g1','and'). gate('g2','and'). val('w1',0). val('w2',1).
         val(W,0) :- output(W,G), gate(G,'and'), count {W: val(W,0), input(W,G)} > 0.",
    );
    let g = &c.ground_completed;
    let facts = one_step(g, g.facts(), &Interpretation::empty(&c.universe)).unwrap();
    let mut with_neg = facts.clone();
    c.add_neg(&mut with_neg, &[Pred::new("input", 2), Pred::new("output", 2), Pred::new("gate", 2)]).unwrap();
    let next = one_step(g, &g.rules, &with_neg).unwrap();
    let added: BTreeSet<String> = with_truth(&c, &next, Truth::T).difference(&with_truth(&c, &facts, Truth::T)).cloned().collect();
    assert_eq!(added, common::set(&["val('w0', 0)"]));
}

fn constant() -> impl Strategy<Value = Constant> {
    prop_oneof![8 => (-3i64..=4).prop_map(Constant::int), 1 => Just(Constant::sym("a"))]
}

/// A set of same-arity tuples over atoms `0..n` with up to two witnesses
/// per tuple, and a
/// consistent interpretation and values for its undefined atoms.
fn scenario() -> impl Strategy<Value = (GroundSet, usize, Vec<Truth>, Vec<Truth>)> {
    (1usize..=5, prop_oneof![6 => Just(1usize), 1 => Just(2usize)]).prop_flat_map(|(n, arity)| {
        let witness = (0..n as AtomId, any::<bool>()).prop_map(|(atom, positive)| vec![GroundLit { atom, positive }]);
        let groups = prop::collection::btree_map(prop::collection::vec(constant(), arity), prop::collection::vec(witness, 1..=2), 0..=4)
            .prop_map(|m| GroundSet { groups: m.into_iter().map(|(tuple, witnesses)| TupleGroup { tuple, witnesses }).collect() });
        let truth = prop_oneof![Just(Truth::T), Just(Truth::F), Just(Truth::UD)];
        (groups, Just(n), prop::collection::vec(truth.clone(), n), prop::collection::vec(truth, n))
    })
}

fn cmp_strategy() -> impl Strategy<Value = GroundCmp> {
    let agg = prop_oneof![Just(AggOp::Count), Just(AggOp::Sum), Just(AggOp::Min), Just(AggOp::Max)];
    let op = prop_oneof![Just(CmpOp::Eq), Just(CmpOp::Ne), Just(CmpOp::Lt), Just(CmpOp::Le), Just(CmpOp::Gt), Just(CmpOp::Ge)];
    (agg, op, -3i64..=5).prop_map(|(agg, op, k)| GroundCmp { agg, set: 0, op, rhs: Constant::int(k) })
}

/// `small` with the undefined atoms filled from `extra`.
fn extend(small: &[Truth], extra: &[Truth]) -> Vec<Truth> {
    small.iter().zip(extra).map(|(s, e)| if *s == Truth::UD { *e } else { *s }).collect()
}

/// Truth of each tuple under a 2-valued assignment.
fn members(set: &GroundSet, assignment: &[bool]) -> BTreeSet<Vec<Constant>> {
    set.groups
        .iter()
        .filter(|g| g.witnesses.iter().any(|w| w.iter().all(|l| assignment[l.atom as usize] == l.positive)))
        .map(|g| g.tuple.clone())
        .collect()
}

fn holds_2valued(c: &GroundCmp, tuples: &BTreeSet<Vec<Constant>>) -> Option<bool> {
    match aggregate_2valued(c.agg, tuples).ok()? {
        AggValue::Tuple(_) => None,
        v => Some(compare_value(&v, c.op, &c.rhs)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn exclusive_and_monotone((set, _n, small, extra) in scenario(), c in cmp_strategy()) {
        let i = interp(&small);
        let j = interp(&extend(&small, &extra));
        prop_assert!(!(derivable(&c, &set, &i) && derivable(&c.complement(), &set, &i)));
        if derivable(&c, &set, &i) {
            prop_assert!(derivable(&c, &set, &j));
        }
    }

    #[test]
    fn two_valued_adequacy((set, n, small, _extra) in scenario(), c in cmp_strategy()) {
        let assignment: Vec<bool> = small.iter().map(|t| *t == Truth::T).collect();
        let full: Vec<Truth> = assignment.iter().map(|b| Truth::from_bool(*b)).collect();
        let i = interp(&full);
        prop_assert_eq!(assignment.len(), n);
        let direct = holds_2valued(&c, &members(&set, &assignment));
        let (pos, neg) = (derivable(&c, &set, &i), derivable(&c.complement(), &set, &i));
        match direct {
            Some(v) => { prop_assert_eq!(pos, v); prop_assert_eq!(neg, !v); }
            None => { prop_assert!(!pos && !neg); }
        }
    }

    /// Derivable comparisons hold in every 2-valued completion.
    #[test]
    fn derivability_is_sound((set, n, small, _extra) in scenario(), c in cmp_strategy()) {
        let i = interp(&small);
        if derivable(&c, &set, &i) {
            let free: Vec<usize> = (0..n).filter(|a| small[*a] == Truth::UD).collect();
            for mask in 0u32..(1 << free.len()) {
                let mut assignment: Vec<bool> = small.iter().map(|t| *t == Truth::T).collect();
                for (b, a) in free.iter().enumerate() {
                    assignment[*a] = mask >> b & 1 == 1;
                }
                prop_assert_eq!(holds_2valued(&c, &members(&set, &assignment)), Some(true));
            }
        }
    }

    /// The engine agrees with the oracle's bounds-style derivability rules.
    #[test]
    fn engine_matches_oracle_bounds((set, _n, small, _extra) in scenario(), c in cmp_strategy()) {
        let i = interp(&small);
        let by = |t: Truth| -> Vec<Vec<Constant>> {
            set.groups.iter().filter(|g| foundalog::ground::tuple_truth(g, &i) == t).map(|g| g.tuple.clone()).collect()
        };
        let expected = derivable_from_sets(c.agg, c.op, &c.rhs, &by(Truth::T), &by(Truth::UD));
        prop_assert_eq!(derivable(&c, &set, &i), expected);
        prop_assert_eq!(cmp_truth(&c, &set, &i) == Truth::T, expected);
    }
}
