//! Abstract syntax of programs and its concrete-syntax printer.
//!
//! The `Display` impls print the same surface syntax the parser reads, so
//! `parse(&program.to_string())` reproduces any program that came from
//! source text. Constructs that only the completion transform produces
//! (term equalities, negative conclusions, renamed `n.` predicates, fresh
//! `$v` variables) print in a readable form that the parser rejects.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::value::Constant;

/// A predicate, identified by name and arity.
///
/// `negated` marks the renamed predicate `n.P` standing for the negation of
/// `P`; source programs never contain it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pred {
    pub name: Arc<str>,
    pub arity: usize,
    pub negated: bool,
}

impl Pred {
    pub fn new(name: impl AsRef<str>, arity: usize) -> Self {
        Pred { name: Arc::from(name.as_ref()), arity, negated: false }
    }

    /// The renamed negation `n.P` of this predicate (or `P` for `n.P`).
    pub fn negation(&self) -> Self {
        Pred { name: self.name.clone(), arity: self.arity, negated: !self.negated }
    }

    /// The underlying source predicate, dropping any `n.` renaming.
    pub fn base(&self) -> Self {
        Pred { name: self.name.clone(), arity: self.arity, negated: false }
    }

    /// `name/arity`, as used in declarations.
    pub fn signature(&self) -> String {
        format!("{}/{}", self.name, self.arity)
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("n.")?;
        }
        f.write_str(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub Arc<str>);

impl Var {
    pub fn new(name: impl AsRef<str>) -> Self {
        Var(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Constant),
    Var(Var),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Var::new(name))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl From<Constant> for Term {
    fn from(c: Constant) -> Self {
        Term::Const(c)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => c.fmt(f),
            Term::Var(v) => v.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: Pred,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(name: &str, args: Vec<Term>) -> Self {
        Atom { pred: Pred::new(name, args.len()), args }
    }
}

impl fmt::Display for Atom {
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

/// A possibly negated predicate atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { positive: false, atom }
    }

    pub fn complement(&self) -> Self {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("not ")?;
        }
        self.atom.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AggOp {
    Count,
    Min,
    Max,
    Sum,
}

impl AggOp {
    pub fn keyword(self) -> &'static str {
        match self {
            AggOp::Count => "count",
            AggOp::Min => "min",
            AggOp::Max => "max",
            AggOp::Sum => "sum",
        }
    }
}

impl fmt::Display for AggOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Eq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [CmpOp::Eq, CmpOp::Ne, CmpOp::Le, CmpOp::Lt, CmpOp::Ge, CmpOp::Gt];

    /// The operator of the complementary comparison: `=`/`!=`, `<=`/`>`, `>=`/`<`.
    pub fn complement(self) -> Self {
        match self {
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Lt => CmpOp::Ge,
        }
    }

    /// Whether `lhs op rhs` holds given `lhs.cmp(rhs)`.
    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            CmpOp::Eq => ord == Equal,
            CmpOp::Ne => ord != Equal,
            CmpOp::Le => ord != Greater,
            CmpOp::Lt => ord == Less,
            CmpOp::Ge => ord != Less,
            CmpOp::Gt => ord == Greater,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `{X1, ..., Xa : L1, ..., Ln}` with literal-only bodies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetExpr {
    pub vars: Vec<Var>,
    pub body: Vec<Literal>,
}

impl SetExpr {
    /// Variables of the body that are not bound by the set expression.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        self.body.iter().flat_map(|l| l.atom.args.iter().filter_map(Term::as_var)).filter(|v| !self.vars.contains(v)).cloned().collect()
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        write_joined(f, &self.vars, ", ")?;
        f.write_str(": ")?;
        write_joined(f, &self.body, ", ")?;
        f.write_str("}")
    }
}

/// `agg S op rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Comparison {
    pub agg: AggOp,
    pub set: SetExpr,
    pub op: CmpOp,
    pub rhs: Term,
}

impl Comparison {
    pub fn complement(&self) -> Self {
        Comparison { op: self.op.complement(), ..self.clone() }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.agg, self.set, self.op, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Body {
    Lit(Literal),
    Cmp(Comparison),
    /// Conjunction; the empty conjunction is true.
    And(Vec<Body>),
    /// Disjunction; the empty disjunction is false.
    Or(Vec<Body>),
    Exists(Vec<Var>, Box<Body>),
    Forall(Vec<Var>, Box<Body>),
    TermEq(Term, Term),
    TermNeq(Term, Term),
}

impl Body {
    pub fn truth() -> Self {
        Body::And(Vec::new())
    }

    pub fn falsity() -> Self {
        Body::Or(Vec::new())
    }

    /// Free variables, respecting quantifier and set-expression binders.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self {
            Body::Lit(l) => out.extend(l.atom.args.iter().filter_map(Term::as_var).cloned()),
            Body::Cmp(c) => {
                out.extend(c.set.free_vars());
                out.extend(c.rhs.as_var().cloned());
            }
            Body::And(bs) | Body::Or(bs) => bs.iter().for_each(|b| b.collect_free(out)),
            Body::Exists(vs, b) | Body::Forall(vs, b) => {
                let mut inner = b.free_vars();
                for v in vs {
                    inner.remove(v);
                }
                out.extend(inner);
            }
            Body::TermEq(a, b) | Body::TermNeq(a, b) => {
                out.extend(a.as_var().cloned());
                out.extend(b.as_var().cloned());
            }
        }
    }

    /// Visits every literal, including those inside set expressions.
    pub fn for_each_literal(&self, f: &mut impl FnMut(&Literal)) {
        match self {
            Body::Lit(l) => f(l),
            Body::Cmp(c) => c.set.body.iter().for_each(f),
            Body::And(bs) | Body::Or(bs) => bs.iter().for_each(|b| b.for_each_literal(f)),
            Body::Exists(_, b) | Body::Forall(_, b) => b.for_each_literal(f),
            Body::TermEq(..) | Body::TermNeq(..) => {}
        }
    }

    /// Visits every term, including comparison right-hand sides.
    pub fn for_each_term(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Body::Lit(l) => l.atom.args.iter().for_each(&mut *f),
            Body::Cmp(c) => {
                c.set.body.iter().flat_map(|l| &l.atom.args).for_each(&mut *f);
                f(&c.rhs);
            }
            Body::And(bs) | Body::Or(bs) => bs.iter().for_each(|b| b.for_each_term(f)),
            Body::Exists(_, b) | Body::Forall(_, b) => b.for_each_term(f),
            Body::TermEq(a, b) | Body::TermNeq(a, b) => {
                f(a);
                f(b);
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, ctx: Ctx) -> fmt::Result {
        match self {
            Body::Lit(l) => fmt::Display::fmt(l, f),
            Body::Cmp(c) => fmt::Display::fmt(c, f),
            Body::TermEq(a, b) => write!(f, "{a} = {b}"),
            Body::TermNeq(a, b) => write!(f, "{a} != {b}"),
            Body::And(bs) if bs.is_empty() => f.write_str("true"),
            Body::Or(bs) if bs.is_empty() => f.write_str("false"),
            Body::And(bs) => {
                let paren = ctx == Ctx::Conjunct;
                if paren {
                    f.write_str("(")?;
                }
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    b.write(f, Ctx::Conjunct)?;
                }
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Body::Or(bs) => {
                let paren = ctx != Ctx::Top;
                if paren {
                    f.write_str("(")?;
                }
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" or ")?;
                    }
                    b.write(f, Ctx::Disjunct)?;
                }
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Body::Exists(vs, b) | Body::Forall(vs, b) if vs.is_empty() => b.write(f, ctx),
            Body::Exists(vs, b) | Body::Forall(vs, b) => {
                let kw = if matches!(self, Body::Exists(..)) { "some" } else { "each" };
                let paren = ctx != Ctx::Top;
                if paren {
                    f.write_str("(")?;
                }
                write!(f, "{kw} ")?;
                write_joined(f, vs, ", ")?;
                f.write_str(" | ")?;
                b.write(f, Ctx::Top)?;
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    Disjunct,
    Conjunct,
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, Ctx::Top)
    }
}

/// A fact (no body) or a rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Literal,
    pub body: Option<Body>,
}

impl Rule {
    pub fn fact(atom: Atom) -> Self {
        Rule { head: Literal::pos(atom), body: None }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_none()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.head.fmt(f)?;
        if let Some(b) = &self.body {
            f.write_str(" :- ")?;
            b.fmt(f)?;
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certainty {
    Certain,
    Uncertain,
}

/// A possibly partial declaration; unset fields take their defaults during
/// validation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Declaration {
    pub pred: Pred,
    pub certainty: Option<Certainty>,
    pub complete: Option<bool>,
    pub closed: Option<bool>,
}

impl Declaration {
    pub fn new(pred: Pred) -> Self {
        Declaration { pred, certainty: None, complete: None, closed: None }
    }
}

impl fmt::Display for Declaration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@declare {}", self.pred.signature())?;
        match self.certainty {
            Some(Certainty::Certain) => f.write_str(" certain")?,
            Some(Certainty::Uncertain) => f.write_str(" uncertain")?,
            None => {}
        }
        match self.complete {
            Some(true) => f.write_str(" complete")?,
            Some(false) => f.write_str(" not complete")?,
            None => {}
        }
        match self.closed {
            Some(true) => f.write_str(" closed")?,
            Some(false) => f.write_str(" not closed")?,
            None => {}
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub declarations: Vec<Declaration>,
}

impl Program {
    /// Every predicate mentioned in a rule, fact, set expression or
    /// declaration, with `n.` renamings mapped back to their base predicate.
    pub fn predicates(&self) -> BTreeSet<Pred> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            out.insert(r.head.atom.pred.base());
            if let Some(b) = &r.body {
                b.for_each_literal(&mut |l| {
                    out.insert(l.atom.pred.base());
                });
            }
        }
        out.extend(self.declarations.iter().map(|d| d.pred.base()));
        out
    }

    pub fn declaration(&self, pred: &Pred) -> Option<&Declaration> {
        self.declarations.iter().find(|d| &d.pred == pred)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.declarations {
            writeln!(f, "{d}")?;
        }
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// All constants occurring anywhere in the program: fact and rule
/// arguments, set-expression bodies and comparison right-hand sides.
pub fn constants_of(prog: &Program) -> BTreeSet<Constant> {
    let mut out = BTreeSet::new();
    for r in &prog.rules {
        for t in &r.head.atom.args {
            if let Term::Const(c) = t {
                out.insert(c.clone());
            }
        }
        if let Some(b) = &r.body {
            b.for_each_term(&mut |t| {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            });
        }
    }
    out
}

fn write_joined<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        it.fmt(f)?;
    }
    Ok(())
}
