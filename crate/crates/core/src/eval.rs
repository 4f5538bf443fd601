//! Three-valued evaluation of ground bodies, derivability of aggregate
//! comparisons, and one-step derivability.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use crate::ast::{AggOp, CmpOp};
use crate::error::{Error, Result};
use crate::ground::{tuple_truth, AtomId, GBody, GroundCmp, GroundLit, GroundProgram, GroundRule, GroundSet, Universe};
use crate::value::Constant;

/// Truth values ordered `F < UD < T`, so Kleene conjunction is `min` and
/// disjunction is `max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Truth {
    F,
    UD,
    T,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::T
        } else {
            Truth::F
        }
    }

    pub fn and(self, other: Truth) -> Truth {
        self.min(other)
    }

    pub fn or(self, other: Truth) -> Truth {
        self.max(other)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Truth {
        match self {
            Truth::T => Truth::F,
            Truth::F => Truth::T,
            Truth::UD => Truth::UD,
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::T => "T",
            Truth::F => "F",
            Truth::UD => "UD",
        })
    }
}

/// A consistent set of ground predicate literals, stored densely as the
/// truth value of every atom of a universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interpretation {
    values: Vec<Truth>,
}

impl Interpretation {
    pub fn empty(universe: &Universe) -> Self {
        Interpretation { values: vec![Truth::UD; universe.len()] }
    }

    pub fn with_len(len: usize) -> Self {
        Interpretation { values: vec![Truth::UD; len] }
    }

    pub fn from_literals(universe: &Universe, lits: impl IntoIterator<Item = GroundLit>) -> Result<Self> {
        let mut i = Interpretation::empty(universe);
        for l in lits {
            i.insert(l).map_err(|a| inconsistent(universe, a))?;
        }
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(|t| *t == Truth::UD)
    }

    pub fn truth(&self, atom: AtomId) -> Truth {
        self.values[atom as usize]
    }

    pub fn lit_truth(&self, lit: GroundLit) -> Truth {
        let t = self.truth(lit.atom);
        if lit.positive {
            t
        } else {
            t.not()
        }
    }

    pub fn contains(&self, lit: GroundLit) -> bool {
        self.lit_truth(lit) == Truth::T
    }

    /// Adds a literal. Returns whether it was new, or the atom when its
    /// complement is already present.
    pub fn insert(&mut self, lit: GroundLit) -> Result<bool, AtomId> {
        let want = Truth::from_bool(lit.positive);
        let slot = &mut self.values[lit.atom as usize];
        match *slot {
            Truth::UD => {
                *slot = want;
                Ok(true)
            }
            t if t == want => Ok(false),
            _ => Err(lit.atom),
        }
    }

    /// Adds every literal of `other`.
    pub fn extend(&mut self, other: &Interpretation) -> Result<bool, AtomId> {
        let mut changed = false;
        for l in other.literals() {
            changed |= self.insert(l)?;
        }
        Ok(changed)
    }

    pub fn literals(&self) -> impl Iterator<Item = GroundLit> + '_ {
        self.values.iter().enumerate().filter_map(|(i, t)| match t {
            Truth::T => Some(GroundLit { atom: i as AtomId, positive: true }),
            Truth::F => Some(GroundLit { atom: i as AtomId, positive: false }),
            Truth::UD => None,
        })
    }

    pub fn atoms_with(&self, t: Truth) -> impl Iterator<Item = AtomId> + '_ {
        self.values.iter().enumerate().filter(move |(_, v)| **v == t).map(|(i, _)| i as AtomId)
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| *a == Truth::UD || a == b)
    }

    pub fn is_two_valued(&self) -> bool {
        self.values.iter().all(|t| *t != Truth::UD)
    }
}

pub(crate) fn inconsistent(universe: &Universe, atom: AtomId) -> Error {
    Error::Inconsistent(universe.atom(atom).to_string())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Eq,
    Le,
    Ge,
}

fn family(op: CmpOp) -> Family {
    match op {
        CmpOp::Eq | CmpOp::Ne => Family::Eq,
        CmpOp::Le | CmpOp::Lt => Family::Le,
        CmpOp::Ge | CmpOp::Gt => Family::Ge,
    }
}

/// The tuple as a vector of numbers, if every component is numeric.
fn numeric(tuple: &[Constant]) -> Option<Vec<&BigRational>> {
    tuple.iter().map(Constant::as_num).collect()
}

/// Compares a numeric tuple with a scalar; only 1-tuples are comparable.
fn cmp_tuple(tuple: &[&BigRational], k: &BigRational) -> Option<Ordering> {
    match tuple {
        [x] => Some((*x).cmp(k)),
        _ => None,
    }
}

/// Whether the comparison must hold in `interp` however its undefined
/// atoms are resolved.
pub fn derivable(cmp: &GroundCmp, set: &GroundSet, interp: &Interpretation) -> bool {
    let Some(k) = cmp.rhs.as_num() else {
        return false;
    };
    let mut t: Vec<&[Constant]> = Vec::new();
    let mut ud: Vec<&[Constant]> = Vec::new();
    for g in &set.groups {
        match tuple_truth(g, interp) {
            Truth::T => t.push(&g.tuple),
            Truth::UD => ud.push(&g.tuple),
            Truth::F => {}
        }
    }
    let op = cmp.op;
    let fam = family(op);
    match cmp.agg {
        AggOp::Count => {
            let n = match fam {
                Family::Eq if !ud.is_empty() => return false,
                Family::Le => t.len() + ud.len(),
                _ => t.len(),
            };
            op.holds(BigRational::from_integer(n.into()).cmp(k))
        }
        AggOp::Max | AggOp::Min => {
            let is_max = cmp.agg == AggOp::Max;
            // `over_all` takes the extremum over T and UD together, else over T.
            let (check_all, over_all) = match (fam, is_max) {
                (Family::Eq, _) => {
                    if !ud.is_empty() {
                        return false;
                    }
                    (false, false)
                }
                (Family::Le, true) | (Family::Ge, false) => (true, true),
                (Family::Le, false) | (Family::Ge, true) => (true, false),
            };
            let Some(tn) = t.iter().map(|x| numeric(x)).collect::<Option<Vec<_>>>() else {
                return false;
            };
            let udn = if check_all {
                match ud.iter().map(|x| numeric(x)).collect::<Option<Vec<_>>>() {
                    Some(v) => v,
                    None => return false,
                }
            } else {
                Vec::new()
            };
            // With no true tuple the set may turn out empty, leaving the
            // extremum undefined, so a bound over T and UD needs T nonempty.
            if over_all && tn.is_empty() {
                return false;
            }
            let pool: Vec<&Vec<&BigRational>> = if over_all { tn.iter().chain(udn.iter()).collect() } else { tn.iter().collect() };
            if pool.windows(2).any(|w| w[0].len() != w[1].len()) {
                return false;
            }
            let ext = if is_max { pool.into_iter().max() } else { pool.into_iter().min() };
            match ext.and_then(|e| cmp_tuple(e, k)) {
                Some(ord) => op.holds(ord),
                None => false,
            }
        }
        AggOp::Sum => {
            let single = |x: &&[Constant]| match x {
                [c] => c.as_num().cloned(),
                _ => None,
            };
            let Some(tn) = t.iter().map(single).collect::<Option<Vec<_>>>() else {
                return false;
            };
            let mut total: BigRational = tn.iter().sum();
            match fam {
                Family::Eq => {
                    if !ud.is_empty() {
                        return false;
                    }
                }
                Family::Le | Family::Ge => {
                    let Some(udn) = ud.iter().map(single).collect::<Option<Vec<_>>>() else {
                        return false;
                    };
                    for v in udn {
                        let keep = if fam == Family::Le { v.is_positive() } else { v.is_negative() };
                        if keep {
                            total += v;
                        }
                    }
                }
            }
            op.holds(total.cmp(k))
        }
    }
}

/// Truth of a comparison: true when derivable, false when its complement
/// is derivable, undefined otherwise.
pub fn cmp_truth(cmp: &GroundCmp, set: &GroundSet, interp: &Interpretation) -> Truth {
    if derivable(cmp, set, interp) {
        Truth::T
    } else if derivable(&cmp.complement(), set, interp) {
        Truth::F
    } else {
        Truth::UD
    }
}

/// Kleene truth of a ground body; comparisons are evaluated on demand.
pub fn truth_of_body(body: &GBody, prog: &GroundProgram, interp: &Interpretation) -> Truth {
    match body {
        GBody::Const(b) => Truth::from_bool(*b),
        GBody::Lit(l) => interp.lit_truth(*l),
        GBody::Cmp(c) => {
            let c = prog.comparison(*c);
            cmp_truth(c, prog.set(c.set), interp)
        }
        GBody::And(items) => {
            let mut acc = Truth::T;
            for it in items {
                acc = acc.and(truth_of_body(it, prog, interp));
                if acc == Truth::F {
                    break;
                }
            }
            acc
        }
        GBody::Or(items) => {
            let mut acc = Truth::F;
            for it in items {
                acc = acc.or(truth_of_body(it, prog, interp));
                if acc == Truth::T {
                    break;
                }
            }
            acc
        }
    }
}

/// One step of inference: conclusions of the given rules whose bodies are
/// true in `interp` (facts have body `true`).
pub fn one_step<'a>(
    prog: &GroundProgram,
    rules: impl IntoIterator<Item = &'a GroundRule>,
    interp: &Interpretation,
) -> Result<Interpretation> {
    let mut out = Interpretation::empty(&prog.universe);
    for r in rules {
        if truth_of_body(&r.body, prog, interp) == Truth::T {
            out.insert(r.head).map_err(|a| inconsistent(&prog.universe, a))?;
        }
    }
    Ok(out)
}
