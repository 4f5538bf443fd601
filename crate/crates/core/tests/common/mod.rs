//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use foundalog::eval::{Interpretation, Truth};
use foundalog::ground::AtomId;
use foundalog::semantics::Analyzed;
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn analyzed(src: &str) -> Analyzed {
    Analyzed::parse(src).unwrap_or_else(|e| panic!("{e}\n{src}"))
}

pub fn id(a: &Analyzed, atom: &str) -> AtomId {
    (0..a.universe.len() as AtomId).find(|x| a.universe.atom(*x).to_string() == atom).unwrap_or_else(|| panic!("no atom {atom}"))
}

/// Atoms with truth `t`, rendered and sorted.
pub fn with_truth(a: &Analyzed, i: &Interpretation, t: Truth) -> BTreeSet<String> {
    i.atoms_with(t).map(|x| a.universe.atom(x).to_string()).collect()
}

/// Atoms with truth `t` restricted to predicate `name`.
pub fn of_pred(a: &Analyzed, i: &Interpretation, t: Truth, name: &str) -> BTreeSet<String> {
    with_truth(a, i, t).into_iter().filter(|s| s.starts_with(&format!("{name}(")) || s == name).collect()
}

pub fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Constraint models as sets of true atoms.
pub fn model_sets(a: &Analyzed, ms: &[Interpretation]) -> BTreeSet<BTreeSet<String>> {
    ms.iter().map(|m| with_truth(a, m, Truth::T)).collect()
}

struct Gen<'r, R: Rng> {
    rng: &'r mut R,
    preds: Vec<(&'static str, usize)>,
    consts: Vec<&'static str>,
}

impl<R: Rng> Gen<'_, R> {
    fn term(&mut self, vars: &[&'static str]) -> String {
        if !vars.is_empty() && self.rng.random_bool(0.7) {
            vars.choose(self.rng).unwrap().to_string()
        } else {
            self.consts.choose(self.rng).unwrap().to_string()
        }
    }

    fn atom_with(&mut self, pred: (&'static str, usize), vars: &[&'static str]) -> String {
        if pred.1 == 0 {
            return pred.0.to_string();
        }
        let args: Vec<String> = (0..pred.1).map(|_| self.term(vars)).collect();
        format!("{}({})", pred.0, args.join(", "))
    }

    fn literal(&mut self, vars: &[&'static str], allow_neg: bool) -> String {
        let p = *self.preds.choose(self.rng).unwrap();
        let a = self.atom_with(p, vars);
        if allow_neg && self.rng.random_bool(0.35) {
            format!("not {a}")
        } else {
            a
        }
    }

    /// A literal over a predicate of positive arity that mentions `v`.
    fn literal_using(&mut self, v: &'static str, vars: &[&'static str]) -> String {
        let with_args: Vec<(&'static str, usize)> = self.preds.iter().copied().filter(|p| p.1 > 0).collect();
        let p = *with_args.choose(self.rng).unwrap();
        let mut args: Vec<String> = (0..p.1).map(|_| self.term(vars)).collect();
        let slot = self.rng.random_range(0..p.1);
        args[slot] = v.to_string();
        let a = format!("{}({})", p.0, args.join(", "));
        if self.rng.random_bool(0.3) {
            format!("not {a}")
        } else {
            a
        }
    }

    fn comparison(&mut self, vars: &[&'static str]) -> String {
        if self.preds.iter().all(|p| p.1 == 0) {
            return self.literal(vars, true);
        }
        let agg = *["count", "count", "sum", "min", "max"].choose(self.rng).unwrap();
        let op = *["=", "!=", "<", "<=", ">", ">="].choose(self.rng).unwrap();
        let k = *self.consts.choose(self.rng).unwrap();
        let set_var = "S";
        let mut inner: Vec<&'static str> = vars.to_vec();
        inner.push(set_var);
        let mut lits = vec![self.literal_using(set_var, &inner)];
        if self.rng.random_bool(0.3) {
            lits.push(self.literal(&inner, true));
        }
        format!("{agg} {{{set_var}: {}}} {op} {k}", lits.join(", "))
    }

    fn hypothesis(&mut self, vars: &[&'static str], depth: u32) -> String {
        let roll = self.rng.random_range(0..10);
        match roll {
            0..=3 => self.literal(vars, true),
            4..=5 => self.comparison(vars),
            6 if depth > 0 => {
                let (a, b) = (self.hypothesis(vars, depth - 1), self.hypothesis(vars, depth - 1));
                format!("({a} or {b})")
            }
            7 if depth > 0 => {
                let (a, b) = (self.hypothesis(vars, depth - 1), self.hypothesis(vars, depth - 1));
                format!("({a}, {b})")
            }
            8 | 9 if depth > 0 && self.preds.iter().any(|p| p.1 > 0) => {
                let q = "Q";
                let mut inner: Vec<&'static str> = vars.to_vec();
                inner.push(q);
                let lit = self.literal_using(q, &inner);
                let rest = self.hypothesis(&inner, depth - 1);
                let (quant, conn) = if roll == 8 { ("some", ",") } else { ("each", " or") };
                format!("({quant} {q} | {lit}{conn} {rest})")
            }
            _ => self.literal(vars, true),
        }
    }

    fn rule(&mut self) -> String {
        let head = *self.preds.choose(self.rng).unwrap();
        let vars: Vec<&'static str> = ["X", "Y"][..head.1.min(2)].to_vec();
        let head_atom = if head.1 == 0 {
            head.0.to_string()
        } else {
            let args: Vec<&str> = (0..head.1).map(|i| vars[i % vars.len()]).collect();
            format!("{}({})", head.0, args.join(", "))
        };
        // Bind the head variables with positive literals first.
        let mut hyps = Vec::new();
        for v in &vars {
            let bound: Vec<&'static str> = vars.clone();
            let lit = loop {
                let l = self.literal_using(v, &bound);
                if !l.starts_with("not ") {
                    break l;
                }
            };
            hyps.push(lit);
        }
        for _ in 0..self.rng.random_range(usize::from(vars.is_empty())..=2) {
            hyps.push(self.hypothesis(&vars, 2));
        }
        format!("{head_atom} :- {}.", hyps.join(", "))
    }

    fn fact(&mut self) -> String {
        let p = *self.preds.choose(self.rng).unwrap();
        format!("{}.", self.atom_with(p, &[]))
    }
}

/// A small random program: at most three predicates, a domain of at most
/// three constants and at most four rules, plus facts and declarations.
/// The result may fail validation; callers skip those.
pub fn random_program(rng: &mut impl Rng) -> String {
    let pool = ["1", "2", "'a'"];
    let n_consts = rng.random_range(1..=3);
    let mut consts: Vec<&'static str> = pool[..n_consts].to_vec();
    if rng.random_bool(0.5) {
        consts.retain(|c| *c != "'a'");
        if consts.is_empty() {
            consts.push("1");
        }
    }
    let names = ["p", "q", "r"];
    let n_preds = rng.random_range(1..=3);
    let mut binary_used = false;
    let preds: Vec<(&'static str, usize)> = names[..n_preds]
        .iter()
        .map(|n| {
            let mut arity = *[0usize, 1, 1, 1, 2].choose(rng).unwrap();
            if arity == 2 && binary_used {
                arity = 1;
            }
            binary_used |= arity == 2;
            (*n, arity)
        })
        .collect();
    let mut g = Gen { rng, preds: preds.clone(), consts };
    let mut lines = Vec::new();
    for (name, arity) in &preds {
        let word = match g.rng.random_range(0..8) {
            0 => Some("uncertain"),
            1 => Some("uncertain not complete"),
            2 => Some("uncertain closed"),
            _ => None,
        };
        if let Some(w) = word {
            lines.push(format!("@declare {name}/{arity} {w}."));
        }
    }
    for _ in 0..g.rng.random_range(0..=3) {
        lines.push(g.fact());
    }
    for _ in 0..g.rng.random_range(1..=4) {
        lines.push(g.rule());
    }
    lines.join("\n")
}
