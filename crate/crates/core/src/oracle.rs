//! Brute-force reference semantics for differential testing.
//!
//! Everything here works directly on the AST: atoms are `(name, args)`
//! pairs, bodies are evaluated by walking quantifiers over the domain, and
//! completion is checked through the truth of the original rule bodies
//! rather than through a transformed program. Nothing is shared with the
//! engine beyond the parser and the AST types.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::ast::{AggOp, Body, Certainty, CmpOp, Comparison, Literal, Program, Rule, Term, Var};
use crate::error::{Error, Result};
use crate::value::Constant;

/// A ground atom: predicate name and arguments (the arity is their count).
pub type OAtom = (String, Vec<Constant>);
/// A 3-valued interpretation; atoms absent from the map are undefined.
pub type OInterp = BTreeMap<OAtom, bool>;

/// Largest number of undefined atoms the model enumeration accepts.
pub const MODEL_LIMIT: usize = 22;
/// Largest number of candidate atoms the unfounded-set search accepts.
pub const UNFOUNDED_LIMIT: usize = 16;

type PredKey = (String, usize);
type Env = Vec<(Var, Constant)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum V {
    T,
    F,
    U,
}

impl V {
    fn of(b: Option<bool>) -> V {
        match b {
            Some(true) => V::T,
            Some(false) => V::F,
            None => V::U,
        }
    }

    fn not(self) -> V {
        match self {
            V::T => V::F,
            V::F => V::T,
            V::U => V::U,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Decl {
    certain: bool,
    complete: bool,
    closed: bool,
}

/// One ground instance of a source rule: the rule and a binding of its
/// free variables.
#[derive(Debug, Clone)]
struct Instance {
    rule: usize,
    env: Env,
}

#[derive(Debug, Clone)]
pub struct Oracle {
    rules: Vec<Rule>,
    domain: Vec<Constant>,
    decls: BTreeMap<PredKey, Decl>,
    order: Vec<Vec<PredKey>>,
    instances: BTreeMap<OAtom, Vec<Instance>>,
}

fn key(l: &Literal) -> PredKey {
    (l.atom.pred.name.to_string(), l.atom.args.len())
}

fn lookup<'a>(env: &'a Env, v: &Var) -> &'a Constant {
    &env.iter().rev().find(|(w, _)| w == v).expect("bound variable").1
}

fn value(env: &Env, t: &Term) -> Constant {
    match t {
        Term::Const(c) => c.clone(),
        Term::Var(v) => lookup(env, v).clone(),
    }
}

fn ground(env: &Env, l: &Literal) -> OAtom {
    (l.atom.pred.name.to_string(), l.atom.args.iter().map(|t| value(env, t)).collect())
}

fn all_tuples(domain: &[Constant], n: usize) -> Vec<Vec<Constant>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                domain.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Constants of the program, collected by folding over every term.
fn fold_constants(prog: &Program) -> Vec<Constant> {
    fn term(t: &Term, out: &mut BTreeSet<Constant>) {
        if let Term::Const(c) = t {
            out.insert(c.clone());
        }
    }
    fn body(b: &Body, out: &mut BTreeSet<Constant>) {
        match b {
            Body::Lit(l) => l.atom.args.iter().for_each(|t| term(t, out)),
            Body::Cmp(c) => {
                term(&c.rhs, out);
                c.set.body.iter().flat_map(|l| &l.atom.args).for_each(|t| term(t, out));
            }
            Body::And(v) | Body::Or(v) => v.iter().for_each(|b| body(b, out)),
            Body::Exists(_, b) | Body::Forall(_, b) => body(b, out),
            Body::TermEq(a, c) | Body::TermNeq(a, c) => {
                term(a, out);
                term(c, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    for r in &prog.rules {
        r.head.atom.args.iter().for_each(|t| term(t, &mut out));
        if let Some(b) = &r.body {
            body(b, &mut out);
        }
    }
    out.into_iter().collect()
}

fn free_vars(b: &Body, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    let mut term = |t: &Term, bound: &Vec<Var>| {
        if let Term::Var(v) = t {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        }
    };
    match b {
        Body::Lit(l) => l.atom.args.iter().for_each(|t| term(t, bound)),
        Body::Cmp(c) => {
            term(&c.rhs, bound);
            let n = bound.len();
            bound.extend(c.set.vars.iter().cloned());
            c.set.body.iter().flat_map(|l| &l.atom.args).for_each(|t| term(t, bound));
            bound.truncate(n);
        }
        Body::And(v) | Body::Or(v) => v.iter().for_each(|b| free_vars(b, bound, out)),
        Body::Exists(vs, b) | Body::Forall(vs, b) => {
            let n = bound.len();
            bound.extend(vs.iter().cloned());
            free_vars(b, bound, out);
            bound.truncate(n);
        }
        Body::TermEq(a, c) | Body::TermNeq(a, c) => {
            term(a, bound);
            term(c, bound);
        }
    }
}

/// Whether making an atom of the set true can only help the comparison
/// hold, per operator and literal sign.
fn positive_in(c: &Comparison, literal_positive: bool) -> bool {
    let up = match c.agg {
        AggOp::Count | AggOp::Max => matches!(c.op, CmpOp::Gt | CmpOp::Ge),
        AggOp::Min => matches!(c.op, CmpOp::Lt | CmpOp::Le),
        AggOp::Sum => return false,
    };
    let down = match c.agg {
        AggOp::Count | AggOp::Max => matches!(c.op, CmpOp::Lt | CmpOp::Le),
        AggOp::Min => matches!(c.op, CmpOp::Gt | CmpOp::Ge),
        AggOp::Sum => return false,
    };
    if literal_positive {
        up
    } else {
        down
    }
}

fn edges_of(b: &Body, out: &mut Vec<(PredKey, bool)>) {
    match b {
        Body::Lit(l) => out.push((key(l), l.positive)),
        Body::Cmp(c) => c.set.body.iter().for_each(|l| out.push((key(l), positive_in(c, l.positive)))),
        Body::And(v) | Body::Or(v) => v.iter().for_each(|b| edges_of(b, out)),
        Body::Exists(_, b) | Body::Forall(_, b) => edges_of(b, out),
        Body::TermEq(..) | Body::TermNeq(..) => {}
    }
}

/// Aggregate value of a fully known set of tuples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum AggValue {
    Num(BigRational),
    Tuple(Vec<BigRational>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AggError {
    #[error("{0} of an empty set")]
    Empty(AggOp),
    #[error("{0} of a set with a non-numeric element")]
    NonNumeric(AggOp),
}

/// The ordinary value of `agg` over a set of tuples.
pub fn aggregate_2valued(agg: AggOp, tuples: &BTreeSet<Vec<Constant>>) -> Result<AggValue, AggError> {
    match agg {
        AggOp::Count => Ok(AggValue::Num(BigRational::from_integer(tuples.len().into()))),
        AggOp::Sum => {
            let mut total = BigRational::zero();
            for t in tuples {
                match t.as_slice() {
                    [c] => total += c.as_num().ok_or(AggError::NonNumeric(agg))?,
                    _ => return Err(AggError::NonNumeric(agg)),
                }
            }
            Ok(AggValue::Num(total))
        }
        AggOp::Max | AggOp::Min => {
            let mut nums: Vec<Vec<BigRational>> = Vec::new();
            for t in tuples {
                let n: Option<Vec<BigRational>> = t.iter().map(|c| c.as_num().cloned()).collect();
                nums.push(n.ok_or(AggError::NonNumeric(agg))?);
            }
            let best = if agg == AggOp::Max { nums.into_iter().max() } else { nums.into_iter().min() };
            match best {
                None => Err(AggError::Empty(agg)),
                Some(mut v) if v.len() == 1 => Ok(AggValue::Num(v.pop().unwrap())),
                Some(v) => Ok(AggValue::Tuple(v)),
            }
        }
    }
}

/// Whether `value op k` holds; tuples never compare with a scalar.
pub fn compare_value(value: &AggValue, op: CmpOp, k: &Constant) -> bool {
    match (value, k.as_num()) {
        (AggValue::Num(n), Some(k)) => op.holds(n.cmp(k)),
        _ => false,
    }
}

fn holds(op: CmpOp, x: &BigRational, k: &BigRational) -> bool {
    op.holds(x.cmp(k))
}

/// Derivability of a comparison from the known-true tuples `t` and the undefined
/// tuples `u`, phrased through the bounds the undefined tuples leave open.
pub fn derivable_from_sets(agg: AggOp, op: CmpOp, k: &Constant, t: &[Vec<Constant>], u: &[Vec<Constant>]) -> bool {
    let Some(k) = k.as_num() else { return false };
    let exact = matches!(op, CmpOp::Eq | CmpOp::Ne);
    let at_most = matches!(op, CmpOp::Le | CmpOp::Lt);
    if exact && !u.is_empty() {
        return false;
    }
    let nums = |s: &[Vec<Constant>]| -> Option<Vec<Vec<BigRational>>> {
        s.iter().map(|x| x.iter().map(|c| c.as_num().cloned()).collect()).collect()
    };
    match agg {
        AggOp::Count => {
            let lowest = BigRational::from_integer(t.len().into());
            let highest = BigRational::from_integer((t.len() + u.len()).into());
            holds(op, if at_most { &highest } else { &lowest }, k)
        }
        AggOp::Sum => {
            let singles = |s: &[Vec<Constant>]| -> Option<Vec<BigRational>> {
                s.iter().map(|x| if x.len() == 1 { x[0].as_num().cloned() } else { None }).collect()
            };
            let Some(tv) = singles(t) else { return false };
            let Some(uv) = singles(u) else { return false };
            let base: BigRational = tv.iter().sum();
            if exact {
                return holds(op, &base, k);
            }
            // The largest possible sum adds every positive undefined value,
            // the smallest every negative one.
            let extra: BigRational = uv.iter().filter(|v| if at_most { v.is_positive() } else { v.is_negative() }).sum();
            holds(op, &(base + extra), k)
        }
        AggOp::Max | AggOp::Min => {
            let Some(tv) = nums(t) else { return false };
            let uv = if exact {
                Vec::new()
            } else {
                match nums(u) {
                    Some(v) => v,
                    None => return false,
                }
            };
            let is_max = agg == AggOp::Max;
            // For max, an upper bound needs every candidate, a lower bound
            // only the certain members; min is the mirror image.
            let everything = at_most == is_max && !exact;
            // If every undefined tuple is false the set may be empty.
            if everything && tv.is_empty() {
                return false;
            }
            let pool: Vec<&Vec<BigRational>> = if everything { tv.iter().chain(uv.iter()).collect() } else { tv.iter().collect() };
            let Some(first) = pool.first() else { return false };
            if pool.iter().any(|x| x.len() != first.len()) || first.len() != 1 {
                return false;
            }
            let best = if is_max { pool.iter().max() } else { pool.iter().min() };
            holds(op, &best.unwrap()[0], k)
        }
    }
}

impl Oracle {
    /// Builds the oracle for a program whose declarations the engine
    /// accepts; defaults are worked out independently here.
    pub fn new(prog: &Program) -> Result<Self> {
        let domain = fold_constants(prog);
        let mut preds: BTreeSet<PredKey> = BTreeSet::new();
        let mut edges: BTreeSet<(PredKey, PredKey, bool)> = BTreeSet::new();
        for r in &prog.rules {
            let h = key(&r.head);
            preds.insert(h.clone());
            if let Some(b) = &r.body {
                let mut es = Vec::new();
                edges_of(b, &mut es);
                for (p, pos) in es {
                    preds.insert(p.clone());
                    edges.insert((h.clone(), p, pos));
                }
            }
        }
        for d in &prog.declarations {
            preds.insert((d.pred.name.to_string(), d.pred.arity));
        }
        let preds: Vec<PredKey> = preds.into_iter().collect();
        let idx = |p: &PredKey| preds.iter().position(|q| q == p).unwrap();
        let n = preds.len();

        // Transitive closure: reach[a][b] when a depends on b through at
        // least one edge.
        let mut reach = vec![vec![false; n]; n];
        for (a, b, _) in &edges {
            reach[idx(a)][idx(b)] = true;
        }
        for m in 0..n {
            for a in 0..n {
                if reach[a][m] {
                    let via = reach[m].clone();
                    for (b, r) in via.into_iter().enumerate() {
                        reach[a][b] |= r;
                    }
                }
            }
        }
        let same = |a: usize, b: usize| a == b || (reach[a][b] && reach[b][a]);
        let circular_non_positive = |p: usize| {
            edges.iter().any(|(a, b, pos)| {
                let (a, b) = (idx(a), idx(b));
                !pos && same(p, a) && (a == b || reach[b][a])
            })
        };

        let explicit = |p: &PredKey| prog.declarations.iter().find(|d| d.pred.name.as_ref() == p.0 && d.pred.arity == p.1);
        let mut uncertain: Vec<bool> = (0..n)
            .map(|i| circular_non_positive(i) || explicit(&preds[i]).is_some_and(|d| d.certainty == Some(Certainty::Uncertain)))
            .collect();
        let seeds = uncertain.clone();
        for q in 0..n {
            if (0..n).any(|p| seeds[p] && reach[q][p]) {
                uncertain[q] = true;
            }
        }
        let mut decls = BTreeMap::new();
        for (i, p) in preds.iter().enumerate() {
            let d = explicit(p);
            let decl = if uncertain[i] {
                let complete = d.and_then(|d| d.complete).unwrap_or(true);
                Decl { certain: false, complete, closed: complete && d.and_then(|d| d.closed).unwrap_or(false) }
            } else {
                Decl { certain: true, complete: false, closed: false }
            };
            decls.insert(p.clone(), decl);
        }

        // Components in dependency order, alphabetical among the ready ones.
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut placed = vec![false; n];
        for i in 0..n {
            if !placed[i] {
                let c: Vec<usize> = (0..n).filter(|j| same(i, *j)).collect();
                c.iter().for_each(|j| placed[*j] = true);
                comps.push(c);
            }
        }
        let mut order = Vec::new();
        let mut done = vec![false; comps.len()];
        while order.len() < comps.len() {
            let next = (0..comps.len())
                .find(|&c| {
                    !done[c]
                        && comps[c].iter().all(|&a| {
                            (0..n).all(|b| !reach[a][b] || same(a, b) || comps.iter().enumerate().any(|(d, m)| done[d] && m.contains(&b)))
                        })
                })
                .expect("acyclic condensation");
            done[next] = true;
            order.push(comps[next].iter().map(|i| preds[*i].clone()).collect());
        }

        let mut instances: BTreeMap<OAtom, Vec<Instance>> = BTreeMap::new();
        for (ri, r) in prog.rules.iter().enumerate() {
            let mut vars: BTreeSet<Var> = BTreeSet::new();
            for t in &r.head.atom.args {
                if let Term::Var(v) = t {
                    vars.insert(v.clone());
                }
            }
            if let Some(b) = &r.body {
                free_vars(b, &mut Vec::new(), &mut vars);
            }
            let vars: Vec<Var> = vars.into_iter().collect();
            for tuple in all_tuples(&domain, vars.len()) {
                let env: Env = vars.iter().cloned().zip(tuple).collect();
                instances.entry(ground(&env, &r.head)).or_default().push(Instance { rule: ri, env });
            }
        }

        Ok(Oracle { rules: prog.rules.clone(), domain, decls, order, instances })
    }

    pub fn domain(&self) -> &[Constant] {
        &self.domain
    }

    /// All ground atoms of a predicate.
    fn atoms_of(&self, p: &PredKey) -> Vec<OAtom> {
        all_tuples(&self.domain, p.1).into_iter().map(|args| (p.0.clone(), args)).collect()
    }

    pub fn all_atoms(&self) -> Vec<OAtom> {
        self.decls.keys().flat_map(|p| self.atoms_of(p)).collect()
    }

    fn decl(&self, name: &str, arity: usize) -> Decl {
        self.decls.get(&(name.to_string(), arity)).copied().unwrap_or(Decl { certain: true, complete: false, closed: false })
    }

    fn is_closed(&self, a: &OAtom) -> bool {
        self.decl(&a.0, a.1.len()).closed
    }

    fn set_members(&self, c: &Comparison, env: &Env, i: &OInterp) -> (Vec<Vec<Constant>>, Vec<Vec<Constant>>) {
        let mut tuples: BTreeMap<Vec<Constant>, V> = BTreeMap::new();
        for vals in all_tuples(&self.domain, c.set.vars.len()) {
            let mut e = env.clone();
            e.extend(c.set.vars.iter().cloned().zip(vals));
            let tuple: Vec<Constant> = c.set.vars.iter().map(|v| lookup(&e, v).clone()).collect();
            let mut t = V::T;
            for l in &c.set.body {
                let v = V::of(i.get(&ground(&e, l)).copied());
                let v = if l.positive { v } else { v.not() };
                t = match (t, v) {
                    (V::F, _) | (_, V::F) => V::F,
                    (V::U, _) | (_, V::U) => V::U,
                    _ => V::T,
                };
            }
            let slot = tuples.entry(tuple).or_insert(V::F);
            *slot = match (*slot, t) {
                (V::T, _) | (_, V::T) => V::T,
                (V::U, _) | (_, V::U) => V::U,
                _ => V::F,
            };
        }
        let pick = |w: V| tuples.iter().filter(|(_, v)| **v == w).map(|(k, _)| k.clone()).collect();
        (pick(V::T), pick(V::U))
    }

    fn cmp_value(&self, c: &Comparison, env: &Env, i: &OInterp) -> V {
        let (t, u) = self.set_members(c, env, i);
        let k = value(env, &c.rhs);
        if derivable_from_sets(c.agg, c.op, &k, &t, &u) {
            V::T
        } else if derivable_from_sets(c.agg, c.op.complement(), &k, &t, &u) {
            V::F
        } else {
            V::U
        }
    }

    fn eval(&self, b: &Body, env: &mut Env, i: &OInterp) -> V {
        match b {
            Body::Lit(l) => {
                let v = V::of(i.get(&ground(env, l)).copied());
                if l.positive {
                    v
                } else {
                    v.not()
                }
            }
            Body::Cmp(c) => self.cmp_value(c, env, i),
            Body::And(items) => {
                let mut acc = V::T;
                for it in items {
                    match self.eval(it, env, i) {
                        V::F => return V::F,
                        V::U => acc = V::U,
                        V::T => {}
                    }
                }
                acc
            }
            Body::Or(items) => {
                let mut acc = V::F;
                for it in items {
                    match self.eval(it, env, i) {
                        V::T => return V::T,
                        V::U => acc = V::U,
                        V::F => {}
                    }
                }
                acc
            }
            Body::Exists(vs, inner) | Body::Forall(vs, inner) => {
                let exists = matches!(b, Body::Exists(..));
                let mut acc = if exists { V::F } else { V::T };
                for vals in all_tuples(&self.domain, vs.len()) {
                    let n = env.len();
                    env.extend(vs.iter().cloned().zip(vals));
                    let v = self.eval(inner, env, i);
                    env.truncate(n);
                    match (exists, v) {
                        (true, V::T) => return V::T,
                        (false, V::F) => return V::F,
                        (_, V::U) => acc = V::U,
                        _ => {}
                    }
                }
                acc
            }
            Body::TermEq(a, c) => {
                if value(env, a) == value(env, c) {
                    V::T
                } else {
                    V::F
                }
            }
            Body::TermNeq(a, c) => {
                if value(env, a) != value(env, c) {
                    V::T
                } else {
                    V::F
                }
            }
        }
    }

    fn instance_value(&self, inst: &Instance, i: &OInterp) -> V {
        match &self.rules[inst.rule].body {
            None => V::T,
            Some(b) => self.eval(b, &mut inst.env.clone(), i),
        }
    }

    fn instances_of(&self, a: &OAtom) -> &[Instance] {
        self.instances.get(a).map(Vec::as_slice).unwrap_or(&[])
    }

    fn set(i: &mut OInterp, a: OAtom, v: bool) -> Result<bool> {
        match i.get(&a) {
            Some(old) if *old == v => Ok(false),
            Some(_) => Err(Error::Inconsistent(format!("{}{:?}", a.0, a.1))),
            None => {
                i.insert(a, v);
                Ok(true)
            }
        }
    }

    /// Founded semantics without closed declarations, with `extra` added
    /// as facts.
    pub fn founded0(&self, extra: &OInterp) -> Result<OInterp> {
        let mut i = OInterp::new();
        for comp in &self.order {
            for (a, v) in extra {
                if comp.contains(&(a.0.clone(), a.1.len())) {
                    Self::set(&mut i, a.clone(), *v)?;
                }
            }
            let atoms: Vec<OAtom> = comp.iter().flat_map(|p| self.atoms_of(p)).collect();
            loop {
                let mut changed = false;
                for a in &atoms {
                    if !i.contains_key(a) && self.instances_of(a).iter().any(|x| self.instance_value(x, &i) == V::T) {
                        changed |= Self::set(&mut i, a.clone(), true)?;
                    }
                }
                // The completion rule of an uncertain complete predicate
                // fires when every instance concluding the atom is false
                // and the atom was not given as a fact.
                for a in &atoms {
                    let d = self.decl(&a.0, a.1.len());
                    if !d.certain
                        && d.complete
                        && !i.contains_key(a)
                        && extra.get(a) != Some(&true)
                        && self.instances_of(a).iter().all(|x| self.instance_value(x, &i) == V::F)
                    {
                        changed |= Self::set(&mut i, a.clone(), false)?;
                    }
                }
                if !changed {
                    break;
                }
            }
            for p in comp {
                if self.decls[p].certain {
                    for a in self.atoms_of(p) {
                        i.entry(a).or_insert(false);
                    }
                }
            }
        }
        Ok(i)
    }

    /// Whether a hypothesis can still support its rule: not false in `i`,
    /// not a positive closed atom of `u`, and (for comparisons) not false
    /// once all of `u` is false.
    fn alive(&self, b: &Body, env: &mut Env, i: &OInterp, u: &BTreeSet<OAtom>, i_not_u: &OInterp) -> bool {
        match b {
            Body::Lit(l) => {
                let a = ground(env, l);
                self.eval(b, env, i) != V::F && !(l.positive && self.is_closed(&a) && u.contains(&a))
            }
            Body::Cmp(c) => self.cmp_value(c, env, i) != V::F && self.cmp_value(c, env, i_not_u) != V::F,
            Body::And(items) => items.iter().all(|x| self.alive(x, env, i, u, i_not_u)),
            Body::Or(items) => items.iter().any(|x| self.alive(x, env, i, u, i_not_u)),
            Body::Exists(vs, inner) | Body::Forall(vs, inner) => {
                let exists = matches!(b, Body::Exists(..));
                let mut check = |vals: Vec<Constant>| {
                    let n = env.len();
                    env.extend(vs.iter().cloned().zip(vals));
                    let r = self.alive(inner, env, i, u, i_not_u);
                    env.truncate(n);
                    r
                };
                let tuples = all_tuples(&self.domain, vs.len());
                if exists {
                    tuples.into_iter().any(&mut check)
                } else {
                    tuples.into_iter().all(&mut check)
                }
            }
            Body::TermEq(..) | Body::TermNeq(..) => self.eval(b, env, i) == V::T,
        }
    }

    /// Whether `u` (closed atoms not true in `i`) is unfounded.
    pub fn is_unfounded(&self, u: &BTreeSet<OAtom>, i: &OInterp) -> bool {
        let mut i_not_u = i.clone();
        for a in u {
            i_not_u.insert(a.clone(), false);
        }
        u.iter().all(|a| {
            !i.get(a).copied().unwrap_or(false)
                && self.instances_of(a).iter().all(|inst| match &self.rules[inst.rule].body {
                    None => false,
                    Some(b) => !self.alive(b, &mut inst.env.clone(), i, u, &i_not_u),
                })
        })
    }

    /// The greatest unfounded set, found by trying subsets of the candidate
    /// atoms from the largest down. Unfounded sets are closed under union,
    /// so the first one found is the greatest.
    pub fn greatest_unfounded(&self, i: &OInterp) -> Result<BTreeSet<OAtom>> {
        let candidates: Vec<OAtom> = self.all_atoms().into_iter().filter(|a| self.is_closed(a) && i.get(a) != Some(&true)).collect();
        let n = candidates.len();
        if n > UNFOUNDED_LIMIT {
            return Err(Error::OracleScale { atoms: n, limit: UNFOUNDED_LIMIT });
        }
        let mut masks: Vec<u32> = (0..1u32 << n).collect();
        masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
        for m in masks {
            let u: BTreeSet<OAtom> = (0..n).filter(|b| m >> b & 1 == 1).map(|b| candidates[b].clone()).collect();
            if self.is_unfounded(&u, i) {
                return Ok(u);
            }
        }
        Ok(BTreeSet::new())
    }

    /// The founded model.
    pub fn founded(&self) -> Result<OInterp> {
        if !self.decls.values().any(|d| d.closed) {
            return self.founded0(&OInterp::new());
        }
        let mut i = OInterp::new();
        loop {
            let mut next = self.founded0(&i)?;
            for a in self.greatest_unfounded(&next)? {
                Self::set(&mut next, a, false)?;
            }
            if next == i {
                return Ok(i);
            }
            i = next;
        }
    }

    /// Whether a 2-valued `m` satisfies the completed program: every rule
    /// instance with a true body has a true conclusion, and every true atom
    /// of an uncertain complete predicate has an instance whose body is not
    /// false (otherwise its completion rule would make it false).
    pub fn is_completion_model(&self, m: &OInterp) -> bool {
        for (a, insts) in &self.instances {
            let head = m.get(a).copied();
            if head != Some(true) && insts.iter().any(|x| self.instance_value(x, m) == V::T) {
                return false;
            }
        }
        for a in self.all_atoms() {
            let d = self.decl(&a.0, a.1.len());
            if !d.certain
                && d.complete
                && m.get(&a) == Some(&true)
                && self.instances_of(&a).iter().all(|x| self.instance_value(x, m) == V::F)
            {
                return false;
            }
        }
        true
    }

    /// Whether every atom of the greatest unfounded set of `m` is false in
    /// `m`. Past the subset-search scale this falls back to the closed atoms
    /// not true in `m`, the set the search starts from.
    fn self_false_holds(&self, m: &OInterp) -> Result<bool> {
        let u = match self.greatest_unfounded(m) {
            Ok(u) => u,
            Err(Error::OracleScale { .. }) => {
                self.all_atoms().into_iter().filter(|a| self.is_closed(a) && m.get(a) != Some(&true)).collect()
            }
            Err(e) => return Err(e),
        };
        Ok(u.iter().all(|a| m.get(a) == Some(&false)))
    }

    /// Constraint models as sets of true atoms, sorted.
    pub fn constraint_models(&self) -> Result<Vec<BTreeSet<OAtom>>> {
        let founded = self.founded()?;
        let free: Vec<OAtom> = self.all_atoms().into_iter().filter(|a| !founded.contains_key(a)).collect();
        if free.len() > MODEL_LIMIT {
            return Err(Error::OracleScale { atoms: free.len(), limit: MODEL_LIMIT });
        }
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << free.len()) {
            let mut m = founded.clone();
            for (b, a) in free.iter().enumerate() {
                m.insert(a.clone(), mask >> b & 1 == 1);
            }
            if self.is_completion_model(&m) && self.self_false_holds(&m)? {
                out.push(m.iter().filter(|(_, v)| **v).map(|(a, _)| a.clone()).collect());
            }
        }
        out.sort();
        Ok(out)
    }
}
