//! Combined rules, completion rules and renaming of negation.

mod common;

use std::sync::Arc;

use common::random_program;
use foundalog::ast::{Body, Pred, Program};
use foundalog::declare::{validate_declarations, DeclTable};
use foundalog::depgraph::DependencyGraph;
use foundalog::eval::Interpretation;
use foundalog::ground::{ground_rules, AtomId, GroundAtom, GroundLit, Universe};
use foundalog::parse;
use foundalog::semantics::check_model;
use foundalog::transform::{add_inv, combine, completion, name_neg, unname_neg};
use foundalog::value::Constant;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn resolved(src: &str) -> (Program, DeclTable) {
    let p = parse(src).unwrap();
    let p = validate_declarations(&p, &DependencyGraph::new(&p)).unwrap();
    let d = DeclTable::from_program(&p);
    (p, d)
}

fn rules_of(p: &Program) -> Vec<String> {
    p.rules.iter().map(|r| r.to_string()).collect()
}

const SELF_COUNT: &str = "p('a') :- count {X: p(X)} = 1.";
const CORRELATED: &str = "@declare p/1 uncertain.\np(1). p(3) :- count {X: p(X)} >= 2. p(2) :- count {X: p(X)} >= 2.";
const DOUBLE_WIN: &str = "win(X) :- count {Y: move(X, Y), not win(Y)} >= 2.";

#[test]
fn combined_rule_without_rule_variables() {
    let (p, d) = resolved(SELF_COUNT);
    assert_eq!(rules_of(&combine(&p, &d)), ["p($v1) :- $v1 = 'a', count {X: p(X)} = 1."]);
}

#[test]
fn combined_rule_of_a_fact_and_two_rules() {
    let (p, d) = resolved(CORRELATED);
    let c = combine(&p, &d);
    assert_eq!(c.rules.len(), 1);
    let Some(Body::Or(disjuncts)) = &c.rules[0].body else { panic!("expected a disjunction") };
    let guards: Vec<String> = disjuncts
        .iter()
        .map(|d| match d {
            Body::And(parts) => parts[0].to_string(),
            other => other.to_string(),
        })
        .collect();
    assert_eq!(guards, ["$v1 = 1", "$v1 = 3", "$v1 = 2"]);
}

#[test]
fn certain_predicates_are_unchanged() {
    let (p, d) = resolved("enrolled('s1','c'). enrolled('s2','c'). need_ta(C) :- enrolled(S1, C), count {S: enrolled(S, C)} > 20.");
    assert!(d.get(&Pred::new("enrolled", 2)).certain);
    assert_eq!(combine(&p, &d), p);
    assert_eq!(completion(&p, &d), p);
}

#[test]
fn completion_rules() {
    let (p, d) = resolved(SELF_COUNT);
    assert_eq!(rules_of(&add_inv(&combine(&p, &d), &d))[1], "not p($v1) :- $v1 != 'a' or count {X: p(X)} != 1.");

    let (p, d) = resolved(CORRELATED);
    assert_eq!(
        rules_of(&completion(&p, &d))[1],
        "not p($v1) :- $v1 != 1, ($v1 != 3 or count {X: p(X)} < 2), ($v1 != 2 or count {X: p(X)} < 2)."
    );

    let (p, d) = resolved(DOUBLE_WIN);
    assert_eq!(rules_of(&completion(&p, &d))[1], "not win($v1) :- each X | $v1 != X or count {Y: move(X, Y), not win(Y)} < 2.");
}

#[test]
fn renamed_double_win_rules() {
    let (p, d) = resolved(DOUBLE_WIN);
    assert_eq!(
        rules_of(&name_neg(&completion(&p, &d))),
        [
            "win($v1) :- some X | $v1 = X, count {Y: move(X, Y), n.win(Y)} >= 2.",
            "n.win($v1) :- each X | $v1 != X or count {Y: move(X, Y), n.win(Y)} < 2.",
        ]
    );
}

#[test]
fn renaming_without_negation_is_identity() {
    let p = parse("p(1). q(X) :- p(X), count {Y: p(Y)} >= 1.").unwrap();
    assert_eq!(name_neg(&p), p);
}

#[test]
fn unname_neg_restores_literals() {
    let win = Pred::new("win", 1);
    let atoms =
        [GroundAtom { pred: win.clone(), args: vec![Constant::int(1)] }, GroundAtom { pred: win.negation(), args: vec![Constant::int(2)] }];
    let back: Vec<(String, bool)> = unname_neg(atoms).into_iter().map(|(a, b)| (a.to_string(), b)).collect();
    assert_eq!(back, [("win(1)".to_string(), true), ("win(2)".to_string(), false)]);
}

#[test]
fn fresh_variables_cannot_be_written_in_source() {
    assert!(parse("p($v1) :- q($v1).").is_err());
}

/// Every 2-valued interpretation satisfies the original rules exactly when
/// it satisfies the combined ones.
#[test]
fn combined_rules_are_equivalent_on_two_valued_interpretations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for _ in 0..400 {
        let src = random_program(&mut rng);
        let Ok(p) = parse(&src).and_then(|p| validate_declarations(&p, &DependencyGraph::new(&p))) else { continue };
        let d = DeclTable::from_program(&p);
        let universe = Arc::new(Universe::for_program(&p).unwrap());
        if universe.len() > 10 {
            continue;
        }
        let original = ground_rules(&p, universe.clone());
        let combined = ground_rules(&combine(&p, &d), universe.clone());
        for mask in 0u32..(1 << universe.len()) {
            let lits = (0..universe.len() as AtomId).map(|a| GroundLit { atom: a, positive: mask >> a & 1 == 1 });
            let m = Interpretation::from_literals(&universe, lits).unwrap();
            assert_eq!(check_model(&original, &m), check_model(&combined, &m), "{src}\nmask {mask:b}");
        }
        checked += 1;
    }
    assert!(checked >= 100, "only {checked} programs were small enough");
}
