//! Ground instances of rules, set expressions and comparisons over the
//! program's constant domain.
//!
//! Every ground atom of the program gets a dense [`AtomId`] from the
//! [`Universe`]. Quantifiers are expanded while grounding (`each` into a
//! conjunction, `some` into a disjunction over all constants), term
//! (dis)equalities are decided, and the resulting bodies are simplified
//! with the usual unit laws for `true` and `false`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::ast::{AggOp, Body, CmpOp, Literal, Pred, Program, Rule, SetExpr, Term, Var};
use crate::error::{Error, Result};
use crate::eval::{Interpretation, Truth};
use crate::value::Constant;

pub type AtomId = u32;
pub type SetId = usize;
pub type CmpId = usize;

/// Upper bound on the number of ground atoms a program may have.
pub const MAX_ATOMS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub pred: Pred,
    pub args: Vec<Constant>,
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.pred.fmt(f)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                a.fmt(f)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// All ground predicate atoms: every predicate applied to every tuple of
/// domain constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    domain: Vec<Constant>,
    const_index: HashMap<Constant, usize>,
    preds: Vec<Pred>,
    pred_index: HashMap<Pred, usize>,
    offsets: Vec<usize>,
    len: usize,
}

impl Universe {
    pub fn new(preds: impl IntoIterator<Item = Pred>, domain: impl IntoIterator<Item = Constant>) -> Result<Self> {
        let mut domain: Vec<Constant> = domain.into_iter().collect();
        domain.sort();
        domain.dedup();
        let mut preds: Vec<Pred> = preds.into_iter().map(|p| p.base()).collect();
        preds.sort();
        preds.dedup();
        let mut offsets = Vec::with_capacity(preds.len());
        let mut len = 0usize;
        for p in &preds {
            offsets.push(len);
            let n = (domain.len() as u128).pow(p.arity as u32);
            len = len
                .checked_add(usize::try_from(n).unwrap_or(usize::MAX))
                .filter(|l| *l <= MAX_ATOMS)
                .ok_or(Error::UniverseTooLarge { limit: MAX_ATOMS })?;
        }
        let const_index = domain.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let pred_index = preds.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(Universe { domain, const_index, preds, pred_index, offsets, len })
    }

    pub fn for_program(prog: &Program) -> Result<Self> {
        Universe::new(prog.predicates(), crate::ast::constants_of(prog))
    }

    pub fn domain(&self) -> &[Constant] {
        &self.domain
    }

    pub fn preds(&self) -> &[Pred] {
        &self.preds
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn atom_id(&self, pred: &Pred, args: &[Constant]) -> Option<AtomId> {
        let pi = *self.pred_index.get(&pred.base())?;
        if args.len() != pred.arity {
            return None;
        }
        let mut idx = 0usize;
        for a in args {
            idx = idx * self.domain.len() + *self.const_index.get(a)?;
        }
        Some((self.offsets[pi] + idx) as AtomId)
    }

    pub fn ground_atom_id(&self, atom: &GroundAtom) -> Option<AtomId> {
        self.atom_id(&atom.pred, &atom.args)
    }

    pub fn pred_of(&self, id: AtomId) -> &Pred {
        &self.preds[self.pred_slot(id)]
    }

    fn pred_slot(&self, id: AtomId) -> usize {
        let id = id as usize;
        // Zero-sized predicates (positive arity over an empty domain) share an
        // offset with their successor, so take the last predicate starting at
        // or before `id` that actually has atoms.
        let mut slot = self.offsets.partition_point(|&o| o <= id) - 1;
        while self.size_of(slot) == 0 {
            slot -= 1;
        }
        slot
    }

    fn size_of(&self, slot: usize) -> usize {
        let end = self.offsets.get(slot + 1).copied().unwrap_or(self.len);
        end - self.offsets[slot]
    }

    pub fn atom(&self, id: AtomId) -> GroundAtom {
        let slot = self.pred_slot(id);
        let pred = self.preds[slot].clone();
        let mut idx = id as usize - self.offsets[slot];
        let mut args = vec![Constant::int(0); pred.arity];
        for a in args.iter_mut().rev() {
            *a = self.domain[idx % self.domain.len()].clone();
            idx /= self.domain.len();
        }
        GroundAtom { pred, args }
    }

    /// Ids of all atoms of a predicate.
    pub fn atoms_of(&self, pred: &Pred) -> std::ops::Range<AtomId> {
        match self.pred_index.get(&pred.base()) {
            Some(&slot) => self.offsets[slot] as AtomId..(self.offsets[slot] + self.size_of(slot)) as AtomId,
            None => 0..0,
        }
    }
}

/// A ground predicate literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundLit {
    pub atom: AtomId,
    pub positive: bool,
}

impl GroundLit {
    pub fn complement(self) -> Self {
        GroundLit { atom: self.atom, positive: !self.positive }
    }
}

/// The ground instances of a set expression sharing one result tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleGroup {
    pub tuple: Vec<Constant>,
    /// Conjunctive bodies; the tuple belongs to the set when any holds.
    pub witnesses: Vec<Vec<GroundLit>>,
}

/// Ground instances of a set expression, grouped by result tuple and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroundSet {
    pub groups: Vec<TupleGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundCmp {
    pub agg: AggOp,
    pub set: SetId,
    pub op: CmpOp,
    pub rhs: Constant,
}

impl GroundCmp {
    pub fn complement(&self) -> Self {
        GroundCmp { op: self.op.complement(), ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GBody {
    Const(bool),
    Lit(GroundLit),
    Cmp(CmpId),
    And(Vec<GBody>),
    Or(Vec<GBody>),
}

impl GBody {
    fn and(items: Vec<GBody>) -> GBody {
        let mut out = Vec::with_capacity(items.len());
        for it in items {
            match it {
                GBody::Const(true) => {}
                GBody::Const(false) => return GBody::Const(false),
                GBody::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => GBody::Const(true),
            1 => out.pop().unwrap(),
            _ => GBody::And(out),
        }
    }

    fn or(items: Vec<GBody>) -> GBody {
        let mut out = Vec::with_capacity(items.len());
        for it in items {
            match it {
                GBody::Const(false) => {}
                GBody::Const(true) => return GBody::Const(true),
                GBody::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => GBody::Const(false),
            1 => out.pop().unwrap(),
            _ => GBody::Or(out),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundRule {
    pub head: GroundLit,
    /// `Const(true)` for facts.
    pub body: GBody,
}

/// A hypothesis of a disjunct in disjunctive normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hyp {
    Lit(GroundLit),
    Cmp(CmpId),
}

/// One rule per disjunct of a ground rule body's DNF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnfRule {
    pub head: GroundLit,
    pub hyps: Vec<Hyp>,
}

/// A ground program with its shared set and comparison tables.
#[derive(Debug, Clone)]
pub struct GroundProgram {
    pub universe: Arc<Universe>,
    pub sets: Vec<GroundSet>,
    pub cmps: Vec<GroundCmp>,
    pub rules: Vec<GroundRule>,
}

impl GroundProgram {
    pub fn set(&self, id: SetId) -> &GroundSet {
        &self.sets[id]
    }

    pub fn comparison(&self, id: CmpId) -> &GroundCmp {
        &self.cmps[id]
    }

    /// Rules ground from facts.
    pub fn facts(&self) -> impl Iterator<Item = &GroundRule> {
        self.rules.iter().filter(|r| r.body == GBody::Const(true))
    }

    fn fmt_lit(&self, f: &mut fmt::Formatter<'_>, l: GroundLit) -> fmt::Result {
        if !l.positive {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.universe.atom(l.atom))
    }

    fn fmt_body(&self, f: &mut fmt::Formatter<'_>, b: &GBody, nested: bool) -> fmt::Result {
        match b {
            GBody::Const(v) => f.write_str(if *v { "true" } else { "false" }),
            GBody::Lit(l) => self.fmt_lit(f, *l),
            GBody::Cmp(c) => {
                let c = self.comparison(*c);
                write!(f, "{} S{} {} {}", c.agg, c.set, c.op, c.rhs)
            }
            GBody::And(items) | GBody::Or(items) => {
                let sep = if matches!(b, GBody::And(_)) { ", " } else { " or " };
                if nested {
                    f.write_str("(")?;
                }
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    self.fmt_body(f, it, true)?;
                }
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Deterministic listing: set table first, then rules sorted textually.
impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        struct RuleView<'a>(&'a GroundProgram, &'a GroundRule);
        impl fmt::Display for RuleView<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_lit(f, self.1.head)?;
                if self.1.body != GBody::Const(true) {
                    f.write_str(" :- ")?;
                    self.0.fmt_body(f, &self.1.body, false)?;
                }
                f.write_str(".")
            }
        }
        for (i, s) in self.sets.iter().enumerate() {
            write!(f, "S{i} = {{")?;
            for (gi, g) in s.groups.iter().enumerate() {
                if gi > 0 {
                    f.write_str("; ")?;
                }
                f.write_str("(")?;
                for (k, c) in g.tuple.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    c.fmt(f)?;
                }
                f.write_str("): ")?;
                for (wi, w) in g.witnesses.iter().enumerate() {
                    if wi > 0 {
                        f.write_str(" | ")?;
                    }
                    for (li, l) in w.iter().enumerate() {
                        if li > 0 {
                            f.write_str(", ")?;
                        }
                        self.fmt_lit(f, *l)?;
                    }
                }
            }
            writeln!(f, "}}")?;
        }
        let mut lines: Vec<String> = self.rules.iter().map(|r| RuleView(self, r).to_string()).collect();
        lines.sort();
        for l in lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Variable environment with shadowing: later bindings win.
#[derive(Default, Clone)]
struct Env(Vec<(Var, Constant)>);

impl Env {
    fn get(&self, v: &Var) -> &Constant {
        self.0.iter().rev().find(|(w, _)| w == v).map(|(_, c)| c).unwrap_or_else(|| panic!("unbound variable {v} during grounding"))
    }

    fn term(&self, t: &Term) -> Constant {
        match t {
            Term::Const(c) => c.clone(),
            Term::Var(v) => self.get(v).clone(),
        }
    }
}

/// Calls `f` once for every assignment of domain constants to `vars`.
fn for_each_assignment(domain: &[Constant], vars: &[Var], env: &mut Env, f: &mut impl FnMut(&mut Env)) {
    match vars.split_first() {
        None => f(env),
        Some((v, rest)) => {
            for c in domain {
                env.0.push((v.clone(), c.clone()));
                for_each_assignment(domain, rest, env, f);
                env.0.pop();
            }
        }
    }
}

struct Grounder<'a> {
    universe: &'a Universe,
    sets: Vec<GroundSet>,
    set_memo: HashMap<(*const SetExpr, Vec<Constant>), SetId>,
    cmps: Vec<GroundCmp>,
    cmp_memo: HashMap<GroundCmp, CmpId>,
}

impl<'a> Grounder<'a> {
    fn new(universe: &'a Universe) -> Self {
        Grounder { universe, sets: Vec::new(), set_memo: HashMap::new(), cmps: Vec::new(), cmp_memo: HashMap::new() }
    }

    fn lit(&self, l: &Literal, env: &Env) -> GroundLit {
        let args: Vec<Constant> = l.atom.args.iter().map(|t| env.term(t)).collect();
        let atom = self.universe.atom_id(&l.atom.pred, &args).unwrap_or_else(|| panic!("atom {} outside the universe", l.atom));
        // A renamed `n.P` literal is the negative literal of `P`.
        GroundLit { atom, positive: l.positive != l.atom.pred.negated }
    }

    fn set(&mut self, s: &SetExpr, env: &Env) -> SetId {
        let outer: Vec<Constant> = s.free_vars().iter().map(|v| env.get(v).clone()).collect();
        let key = (s as *const SetExpr, outer);
        if let Some(&id) = self.set_memo.get(&key) {
            return id;
        }
        let ground = ground_set(self.universe, s, env);
        let id = self.sets.len();
        self.sets.push(ground);
        self.set_memo.insert(key, id);
        id
    }

    fn body(&mut self, b: &Body, env: &mut Env) -> GBody {
        match b {
            Body::Lit(l) => GBody::Lit(self.lit(l, env)),
            Body::Cmp(c) => {
                let set = self.set(&c.set, env);
                let gc = GroundCmp { agg: c.agg, set, op: c.op, rhs: env.term(&c.rhs) };
                let next = self.cmps.len();
                let id = *self.cmp_memo.entry(gc.clone()).or_insert(next);
                if id == next {
                    self.cmps.push(gc);
                }
                GBody::Cmp(id)
            }
            Body::And(items) => {
                let parts = items.iter().map(|i| self.body(i, env)).collect();
                GBody::and(parts)
            }
            Body::Or(items) => {
                let parts = items.iter().map(|i| self.body(i, env)).collect();
                GBody::or(parts)
            }
            Body::Exists(vars, inner) | Body::Forall(vars, inner) => {
                let mut parts = Vec::new();
                let domain = self.universe.domain.clone();
                for_each_assignment(&domain, vars, env, &mut |env| parts.push(self.body(inner, env)));
                if matches!(b, Body::Exists(..)) {
                    GBody::or(parts)
                } else {
                    GBody::and(parts)
                }
            }
            Body::TermEq(a, c) => GBody::Const(env.term(a) == env.term(c)),
            Body::TermNeq(a, c) => GBody::Const(env.term(a) != env.term(c)),
        }
    }

    fn rule(&mut self, r: &Rule, out: &mut Vec<GroundRule>) {
        let mut vars: Vec<Var> = r.head.atom.args.iter().filter_map(Term::as_var).cloned().collect();
        if let Some(b) = &r.body {
            vars.extend(b.free_vars());
        }
        vars.sort();
        vars.dedup();
        let domain = self.universe.domain.clone();
        let mut env = Env::default();
        for_each_assignment(&domain, &vars, &mut env, &mut |env| {
            let head = self.lit(&r.head, env);
            let body = match &r.body {
                None => GBody::Const(true),
                Some(b) => self.body(b, env),
            };
            // Instances whose body is false can never fire and contribute no
            // DNF disjuncts, so they are dropped.
            if body != GBody::Const(false) {
                out.push(GroundRule { head, body });
            }
        });
    }
}

/// Ground instances of a set expression whose free variables are bound in
/// `outer`; one instance per assignment of its bound variables.
fn ground_set(universe: &Universe, s: &SetExpr, outer: &Env) -> GroundSet {
    let mut env = outer.clone();
    let mut instances: Vec<(Vec<Constant>, Vec<GroundLit>)> = Vec::new();
    let g = Grounder::new(universe);
    for_each_assignment(universe.domain(), &s.vars, &mut env, &mut |env| {
        let tuple = s.vars.iter().map(|v| env.get(v).clone()).collect();
        let body = s.body.iter().map(|l| g.lit(l, env)).collect();
        instances.push((tuple, body));
    });
    instances.sort();
    let mut groups: Vec<TupleGroup> = Vec::new();
    for (tuple, body) in instances {
        match groups.last_mut() {
            Some(g) if g.tuple == tuple => {
                if !g.witnesses.contains(&body) {
                    g.witnesses.push(body)
                }
            }
            _ => groups.push(TupleGroup { tuple, witnesses: vec![body] }),
        }
    }
    GroundSet { groups }
}

/// Ground instances of a set expression after substituting `outer` for its
/// free variables.
pub fn ground_set_with(universe: &Universe, s: &SetExpr, outer: &[(Var, Constant)]) -> GroundSet {
    ground_set(universe, s, &Env(outer.to_vec()))
}

/// All ground instances of a program's rules and facts.
pub fn ground_rules(prog: &Program, universe: Arc<Universe>) -> GroundProgram {
    let mut g = Grounder::new(&universe);
    let mut rules = Vec::new();
    for r in &prog.rules {
        g.rule(r, &mut rules);
    }
    let Grounder { sets, cmps, .. } = g;
    GroundProgram { universe, sets, cmps, rules }
}

/// Disjunctive normal form of a ground body: a list of conjunctions.
/// Comparisons are kept as opaque hypotheses.
pub fn body_dnf(b: &GBody) -> Vec<Vec<Hyp>> {
    match b {
        GBody::Const(true) => vec![Vec::new()],
        GBody::Const(false) => Vec::new(),
        GBody::Lit(l) => vec![vec![Hyp::Lit(*l)]],
        GBody::Cmp(c) => vec![vec![Hyp::Cmp(*c)]],
        GBody::Or(items) => items.iter().flat_map(body_dnf).collect(),
        GBody::And(items) => {
            let mut acc: Vec<Vec<Hyp>> = vec![Vec::new()];
            for it in items {
                let d = body_dnf(it);
                let mut next = Vec::with_capacity(acc.len() * d.len());
                for a in &acc {
                    for conj in &d {
                        let mut c = a.clone();
                        c.extend_from_slice(conj);
                        next.push(c);
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
    }
}

pub fn to_dnf(rule: &GroundRule) -> Vec<DnfRule> {
    body_dnf(&rule.body).into_iter().map(|hyps| DnfRule { head: rule.head, hyps }).collect()
}

/// Tuples of a ground set whose membership has truth `t` in `interp`: a
/// tuple is true when some witness body is true, undefined when none is
/// true but some is undefined, and false otherwise.
pub fn gi_by_truth(set: &GroundSet, interp: &Interpretation, t: Truth) -> Vec<Vec<Constant>> {
    set.groups.iter().filter(|g| tuple_truth(g, interp) == t).map(|g| g.tuple.clone()).collect()
}

pub fn tuple_truth(group: &TupleGroup, interp: &Interpretation) -> Truth {
    group.witnesses.iter().map(|w| w.iter().fold(Truth::T, |acc, l| acc.and(interp.lit_truth(*l)))).fold(Truth::F, Truth::or)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn universe(src: &str) -> (Program, Arc<Universe>) {
        let p = parse(src).unwrap();
        let u = Arc::new(Universe::for_program(&p).unwrap());
        (p, u)
    }

    #[test]
    fn universe_ids_round_trip() {
        let u = Universe::new(
            [Pred::new("p", 2), Pred::new("q", 0), Pred::new("r", 1)],
            [Constant::int(1), Constant::sym("a"), Constant::int(2)],
        )
        .unwrap();
        assert_eq!(u.len(), 9 + 1 + 3);
        for id in 0..u.len() as AtomId {
            let a = u.atom(id);
            assert_eq!(u.ground_atom_id(&a), Some(id), "{a}");
        }
        assert_eq!(u.atoms_of(&Pred::new("q", 0)).len(), 1);
    }

    #[test]
    fn empty_domain_keeps_propositional_atoms() {
        let u = Universe::new([Pred::new("p", 1), Pred::new("q", 0), Pred::new("s", 2)], []).unwrap();
        assert_eq!(u.len(), 1);
        assert_eq!(u.atom(0), GroundAtom { pred: Pred::new("q", 0), args: vec![] });
        assert!(u.atoms_of(&Pred::new("p", 1)).is_empty());
    }

    #[test]
    fn universal_quantifier_expands_to_conjunction() {
        let (p, u) = universe(
            "taken(mike,cs1). taken(mike,cs2). taken(john,cs2). required(cs1). required(cs2).\n\
             ready(S) :- each C | not required(C) or taken(S,C).",
        );
        let g = ground_rules(&p, u.clone());
        let ready: Vec<_> = g.rules.iter().filter(|r| u.pred_of(r.head.atom).name.as_ref() == "ready").collect();
        assert_eq!(u.domain().len(), 4);
        assert_eq!(ready.len(), 4);
        for r in ready {
            let GBody::And(items) = &r.body else { panic!("{:?}", r.body) };
            assert_eq!(items.len(), 4);
            assert!(items.iter().all(|i| matches!(i, GBody::Or(d) if d.len() == 2)));
        }
    }

    #[test]
    fn fact_grounds_to_itself() {
        let (p, u) = universe("p(1).");
        let g = ground_rules(&p, u.clone());
        assert_eq!(g.rules.len(), 1);
        assert_eq!(u.atom(g.rules[0].head.atom).to_string(), "p(1)");
        assert_eq!(g.rules[0].body, GBody::Const(true));
    }

    #[test]
    fn circuit_rule_instances_cover_all_free_assignments() {
        let (p, u) = universe(
            "input(w1,g1). input(w2,g1). input(w0,g2). output(w0,g1). output(w3,g2).\n\
             gate(g1,'and'). gate(g2,'and'). val(w1,0). val(w2,1).\n\
             val(W,0) :- output(W,G), gate(G,'and'), count {W: val(W,0), input(W,G)} > 0.",
        );
        let g = ground_rules(&p, u.clone());
        let n = u.domain().len();
        assert_eq!(n, 9);
        let instances = g.rules.iter().filter(|r| r.body != GBody::Const(true)).count();
        // Enumeration oracle: one instance per (W, G) pair.
        let mut expected = 0;
        for _w in u.domain() {
            for _g in u.domain() {
                expected += 1;
            }
        }
        assert_eq!(instances, expected);
        assert_eq!(expected, n * n);
        // The set expression depends only on G, so one ground set per gate value.
        assert_eq!(g.sets.len(), n);
        for s in &g.sets {
            assert_eq!(s.groups.len(), n);
            assert!(s.groups.iter().all(|grp| grp.witnesses.len() == 1 && grp.witnesses[0].len() == 2));
        }
    }

    #[test]
    fn set_instances_over_domain() {
        let (p, u) = universe("p(1). p(2). p(3).");
        let s = SetExpr { vars: vec![Var::new("X")], body: vec![Literal::pos(crate::ast::Atom::new("p", vec![Term::var("X")]))] };
        let gs = ground_set_with(&u, &s, &[]);
        let tuples: Vec<_> = gs.groups.iter().map(|g| g.tuple.clone()).collect();
        assert_eq!(tuples, vec![vec![Constant::int(1)], vec![Constant::int(2)], vec![Constant::int(3)]]);
        let empty = Universe::new(p.predicates(), []).unwrap();
        assert!(ground_set_with(&empty, &s, &[]).groups.is_empty());
    }

    #[test]
    fn dnf_distributes() {
        let a = GBody::Lit(GroundLit { atom: 0, positive: true });
        let b = GBody::Lit(GroundLit { atom: 1, positive: true });
        let c = GBody::Lit(GroundLit { atom: 2, positive: true });
        let body = GBody::and(vec![GBody::or(vec![a, b]), c]);
        let d = body_dnf(&body);
        let lit = |i| Hyp::Lit(GroundLit { atom: i, positive: true });
        assert_eq!(d, vec![vec![lit(0), lit(2)], vec![lit(1), lit(2)]]);
        assert_eq!(body_dnf(&GBody::and(vec![GBody::Lit(GroundLit { atom: 0, positive: true })])).len(), 1);
    }

    #[test]
    fn term_equalities_simplify_away() {
        // Completion rule of p(a) :- count {X: p(X)} = 1, instantiated at b.
        let src = "p(a) :- count {X: p(X)} = 1. q(b).";
        let (p, u) = universe(src);
        let completed = Program {
            rules: vec![Rule {
                head: Literal::neg(crate::ast::Atom::new("p", vec![Term::var("V")])),
                body: Some(Body::Or(vec![
                    Body::TermNeq(Term::var("V"), Term::Const(Constant::sym("a"))),
                    match &p.rules[0].body {
                        Some(Body::Cmp(c)) => Body::Cmp(c.complement()),
                        _ => unreachable!(),
                    },
                ])),
            }],
            declarations: vec![],
        };
        let g = ground_rules(&completed, u.clone());
        let at_b = g.rules.iter().find(|r| u.atom(r.head.atom).to_string() == "p('b')").unwrap();
        assert_eq!(to_dnf(at_b), vec![DnfRule { head: at_b.head, hyps: vec![] }]);
        let at_a = g.rules.iter().find(|r| u.atom(r.head.atom).to_string() == "p('a')").unwrap();
        assert!(matches!(at_a.body, GBody::Cmp(_)));
    }
}
