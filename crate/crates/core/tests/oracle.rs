//! The brute-force reference semantics and its agreement with the engine.

mod common;

use std::collections::BTreeSet;

use common::{analyzed, random_program};
use foundalog::ast::AggOp;
use foundalog::oracle::{aggregate_2valued, AggError, AggValue, OAtom, OInterp, Oracle};
use foundalog::parse;
use foundalog::report::to_oracle;
use foundalog::value::Constant;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn oracle(src: &str) -> Oracle {
    Oracle::new(&parse(src).unwrap()).unwrap()
}

fn atom(name: &str, args: &[Constant]) -> OAtom {
    (name.to_string(), args.to_vec())
}

fn p(c: Constant) -> OAtom {
    atom("p", &[c])
}

fn ints(rows: &[&[i64]]) -> BTreeSet<Vec<Constant>> {
    rows.iter().map(|r| r.iter().map(|i| Constant::int(*i)).collect()).collect()
}

fn num(i: i64) -> BigRational {
    BigRational::from_integer(i.into())
}

const CORRELATED: &str = "p(1). p(3) :- count {X: p(X)} >= 2. p(2) :- count {X: p(X)} >= 2.";

#[test]
fn correlated_counts_have_two_models() {
    let o = oracle(&format!("@declare p/1 uncertain.\n{CORRELATED}"));
    let one = BTreeSet::from([p(Constant::int(1))]);
    let all: BTreeSet<OAtom> = [1, 2, 3].map(|i| p(Constant::int(i))).into();
    assert_eq!(o.constraint_models().unwrap(), vec![one, all]);
}

#[test]
fn incomplete_self_count_models_both_choices_for_a() {
    // Without a completion rule, p('a') false and p('a') true both satisfy
    // the rule when every other p atom is false.
    let o = oracle("@declare p/1 uncertain not complete.\np('a') :- count {X: p(X)} = 1.");
    let others: OInterp = o.domain().iter().filter(|c| **c != Constant::sym("a")).map(|c| (p(c.clone()), false)).collect();
    for v in [false, true] {
        let mut m = others.clone();
        m.insert(p(Constant::sym("a")), v);
        assert!(o.is_completion_model(&m), "p('a') = {v}");
    }
}

#[test]
fn empty_program_has_the_empty_model() {
    assert_eq!(oracle("").constraint_models().unwrap(), vec![BTreeSet::new()]);
}

#[test]
fn greatest_unfounded_examples() {
    let o = oracle(&format!("@declare p/1 uncertain closed.\n{CORRELATED}"));
    let i: OInterp = [(p(Constant::int(1)), true)].into();
    assert_eq!(o.greatest_unfounded(&i).unwrap(), [p(Constant::int(2)), p(Constant::int(3))].into());

    let o = oracle(CORRELATED);
    assert!(o.greatest_unfounded(&i).unwrap().is_empty());
}

/// Regression value computed by the subset search.
#[test]
fn double_win_greatest_unfounded_set() {
    let src = format!("@declare win/1 uncertain closed.\n{}", include_str!("../corpus/double_win.fl"));
    let o = oracle(&src);
    let f0 = o.founded0(&OInterp::new()).unwrap();
    let win = |i: i64| atom("win", &[Constant::int(i)]);
    assert_eq!(o.greatest_unfounded(&f0).unwrap(), [win(2), win(3)].into());

    let a = analyzed(&src);
    let engine: BTreeSet<String> = a.self_false(&a.founded0().unwrap()).into_iter().map(|x| a.universe.atom(x).to_string()).collect();
    assert_eq!(engine, common::set(&["win(2)", "win(3)"]));
}

#[test]
fn aggregate_examples() {
    assert!(matches!(aggregate_2valued(AggOp::Count, &BTreeSet::new()), Ok(AggValue::Num(n)) if n == num(0)));
    assert!(matches!(aggregate_2valued(AggOp::Sum, &BTreeSet::new()), Ok(AggValue::Num(n)) if n == num(0)));
    assert!(matches!(aggregate_2valued(AggOp::Max, &ints(&[&[1, 2], &[1, 3]])), Ok(AggValue::Tuple(t)) if t == [num(1), num(3)]));
    assert!(matches!(aggregate_2valued(AggOp::Sum, &ints(&[&[3], &[-2], &[4]])), Ok(AggValue::Num(n)) if n == num(5)));
    assert!(matches!(aggregate_2valued(AggOp::Min, &BTreeSet::new()), Err(AggError::Empty(_))));
    let symbols = BTreeSet::from([vec![Constant::sym("a")]]);
    assert!(matches!(aggregate_2valued(AggOp::Max, &symbols), Err(AggError::NonNumeric(_))));
}

/// Founded models, unfounded sets and constraint models agree with the
/// engine on random programs within the oracle's scale.
#[test]
fn engine_agrees_on_random_programs() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut compared = 0;
    for _ in 0..250 {
        let src = random_program(&mut rng);
        let Ok(a) = foundalog::semantics::Analyzed::parse(&src) else { continue };
        let o = oracle(&src);
        let f = a.founded().unwrap();
        assert_eq!(to_oracle(&a, &f), o.founded().unwrap(), "{src}");

        let f0 = a.founded0().unwrap();
        if let Ok(u) = o.greatest_unfounded(&to_oracle(&a, &f0)) {
            let engine: BTreeSet<OAtom> =
                a.self_false(&f0).into_iter().map(|x| a.universe.atom(x)).map(|g| (g.pred.name.to_string(), g.args)).collect();
            assert_eq!(engine, u, "{src}");
        }

        if let (Ok(want), Ok(got)) = (o.constraint_models(), a.constraint_models(&f, Default::default())) {
            let got: BTreeSet<BTreeSet<OAtom>> =
                got.models.iter().map(|m| to_oracle(&a, m).into_iter().filter(|(_, v)| *v).map(|(k, _)| k).collect()).collect();
            assert_eq!(got, want.into_iter().collect(), "{src}");
            compared += 1;
        }
    }
    assert!(compared >= 100, "only {compared} programs within scale");
}
