//! Completion of uncertain complete predicates and renaming of negation.

use std::collections::BTreeSet;

use crate::ast::{Atom, Body, Literal, Pred, Program, Rule, SetExpr, Term, Var};
use crate::declare::DeclTable;
use crate::ground::GroundAtom;

/// Prefix of the fresh head variables of combined rules. Source variables
/// cannot start with `$`, so these never collide.
pub const FRESH_PREFIX: &str = "$v";

fn fresh_vars(arity: usize) -> Vec<Var> {
    (1..=arity).map(|i| Var::new(format!("{FRESH_PREFIX}{i}"))).collect()
}

fn and(mut items: Vec<Body>) -> Body {
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        Body::And(items)
    }
}

fn or(mut items: Vec<Body>) -> Body {
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        Body::Or(items)
    }
}

/// One disjunct of a combined rule: `some Y | V1=X1 and ... and B`, where
/// `Y` are the free variables of the original rule.
fn disjunct(rule: &Rule, vs: &[Var]) -> Body {
    let mut parts: Vec<Body> = vs.iter().zip(&rule.head.atom.args).map(|(v, x)| Body::TermEq(Term::Var(v.clone()), x.clone())).collect();
    let mut ys: BTreeSet<Var> = rule.head.atom.args.iter().filter_map(Term::as_var).cloned().collect();
    if let Some(b) = &rule.body {
        ys.extend(b.free_vars());
        parts.push(b.clone());
    }
    let inner = and(parts);
    if ys.is_empty() {
        inner
    } else {
        Body::Exists(ys.into_iter().collect(), Box::new(inner))
    }
}

/// The single rule equivalent to all facts and rules concluding `q`.
pub fn combined_rule(prog: &Program, q: &Pred) -> Rule {
    let vs = fresh_vars(q.arity);
    let disjuncts: Vec<Body> = prog.rules.iter().filter(|r| r.head.positive && &r.head.atom.pred == q).map(|r| disjunct(r, &vs)).collect();
    let head = Literal::pos(Atom { pred: q.clone(), args: vs.into_iter().map(Term::Var).collect() });
    Rule { head, body: Some(or(disjuncts)) }
}

/// Replaces the facts and rules of every uncertain complete predicate with
/// its combined rule, placed where the predicate's first rule was.
pub fn combine(prog: &Program, decls: &DeclTable) -> Program {
    let targets: Vec<&Pred> = decls.iter().filter(|(_, d)| d.uncertain_complete()).map(|(p, _)| p).collect();
    let is_target = |r: &Rule| r.head.positive && targets.contains(&&r.head.atom.pred);
    let mut rules = Vec::with_capacity(prog.rules.len());
    let mut emitted: BTreeSet<Pred> = BTreeSet::new();
    for r in &prog.rules {
        if is_target(r) {
            if emitted.insert(r.head.atom.pred.clone()) {
                rules.push(combined_rule(prog, &r.head.atom.pred));
            }
        } else {
            rules.push(r.clone());
        }
    }
    // Uncertain complete predicates without any rule are defined by `false`.
    for q in targets {
        if !emitted.contains(q) {
            rules.push(combined_rule(prog, q));
        }
    }
    Program { rules, declarations: prog.declarations.clone() }
}

/// Negation normal form of `not b`; negation ends up only on predicate
/// literals, and negated comparisons become their complements.
pub fn negate(b: &Body) -> Body {
    match b {
        Body::Lit(l) => Body::Lit(l.complement()),
        Body::Cmp(c) => Body::Cmp(c.complement()),
        Body::And(items) => Body::Or(items.iter().map(negate).collect()),
        Body::Or(items) => Body::And(items.iter().map(negate).collect()),
        Body::Exists(vs, inner) => Body::Forall(vs.clone(), Box::new(negate(inner))),
        Body::Forall(vs, inner) => Body::Exists(vs.clone(), Box::new(negate(inner))),
        Body::TermEq(a, c) => Body::TermNeq(a.clone(), c.clone()),
        Body::TermNeq(a, c) => Body::TermEq(a.clone(), c.clone()),
    }
}

/// Adds the completion rule `not Q(V) :- NNF(not B)` after each combined
/// rule of an uncertain complete predicate.
pub fn add_inv(prog: &Program, decls: &DeclTable) -> Program {
    let mut rules = Vec::with_capacity(prog.rules.len() * 2);
    for r in &prog.rules {
        rules.push(r.clone());
        let p = &r.head.atom.pred;
        if r.head.positive && decls.get(p).uncertain_complete() {
            let body = r.body.as_ref().map(negate).unwrap_or_else(Body::falsity);
            rules.push(Rule { head: r.head.complement(), body: Some(body) });
        }
    }
    Program { rules, declarations: prog.declarations.clone() }
}

/// The completed program.
pub fn completion(prog: &Program, decls: &DeclTable) -> Program {
    add_inv(&combine(prog, decls), decls)
}

fn rename_lit(l: &Literal) -> Literal {
    if l.positive {
        l.clone()
    } else {
        Literal::pos(Atom { pred: l.atom.pred.negation(), args: l.atom.args.clone() })
    }
}

fn rename_body(b: &Body) -> Body {
    match b {
        Body::Lit(l) => Body::Lit(rename_lit(l)),
        Body::Cmp(c) => {
            let mut c = c.clone();
            c.set = SetExpr { vars: c.set.vars.clone(), body: c.set.body.iter().map(rename_lit).collect() };
            Body::Cmp(c)
        }
        Body::And(items) => Body::And(items.iter().map(rename_body).collect()),
        Body::Or(items) => Body::Or(items.iter().map(rename_body).collect()),
        Body::Exists(vs, inner) => Body::Exists(vs.clone(), Box::new(rename_body(inner))),
        Body::Forall(vs, inner) => Body::Forall(vs.clone(), Box::new(rename_body(inner))),
        Body::TermEq(..) | Body::TermNeq(..) => b.clone(),
    }
}

/// Replaces every negative literal `not P(t)` with `n.P(t)`, in heads,
/// bodies and set expressions.
pub fn name_neg(prog: &Program) -> Program {
    let rules = prog.rules.iter().map(|r| Rule { head: rename_lit(&r.head), body: r.body.as_ref().map(rename_body) }).collect();
    Program { rules, declarations: prog.declarations.clone() }
}

/// Maps `n.P(c)` atoms back to negative literals of `P`.
pub fn unname_neg(atoms: impl IntoIterator<Item = GroundAtom>) -> BTreeSet<(GroundAtom, bool)> {
    atoms
        .into_iter()
        .map(|a| {
            let positive = !a.pred.negated;
            (GroundAtom { pred: a.pred.base(), args: a.args }, positive)
        })
        .collect()
}
