//! Founded and constraint semantics.
//!
//! The founded model is computed SCC by SCC over the ground completed
//! program, with negated predicates `n.P` represented directly as negative
//! literals of `P`. Closed predicates are handled by iterating the founded
//! computation together with the greatest unfounded set until nothing
//! changes. Constraint models are found by trying every truth assignment
//! to the atoms the founded model leaves undefined.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::ast::{Pred, Program};
use crate::declare::{validate_declarations, DeclTable};
use crate::depgraph::{DependencyGraph, SccPlan, TieBreak};
use crate::error::{Error, Result};
use crate::eval::{cmp_truth, derivable, inconsistent, one_step, truth_of_body, Interpretation, Truth};
use crate::ground::{body_dnf, ground_rules, AtomId, GroundLit, GroundProgram, GroundRule, Hyp, Universe};
use crate::transform::{completion, name_neg};

/// Default bound on the number of undefined atoms whose assignments are
/// enumerated for constraint models.
pub const DEFAULT_BUDGET: usize = 20;

/// A validated program with everything derived from it that the semantics
/// needs.
#[derive(Debug, Clone)]
pub struct Analyzed {
    /// The input with every predicate's declaration resolved.
    pub program: Program,
    pub graph: DependencyGraph,
    pub decls: DeclTable,
    pub universe: Arc<Universe>,
    /// The completed program, negation renamed.
    pub completed: Program,
    pub plan: SccPlan,
    pub ground_original: GroundProgram,
    pub ground_completed: GroundProgram,
    /// SCC index of each rule of `ground_completed`.
    rule_component: Vec<usize>,
    /// DNF disjuncts of the original ground rules, by concluded atom.
    dnf: BTreeMap<AtomId, Vec<Vec<Hyp>>>,
}

/// Sizes of the interpretation after each LFP round of one SCC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccTrace {
    pub component: Vec<Pred>,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintModels {
    pub models: Vec<Interpretation>,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    /// Stop after this many models, setting the truncation flag.
    pub limit: Option<usize>,
    /// Refuse to enumerate when more atoms than this are undefined.
    pub budget: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { limit: None, budget: DEFAULT_BUDGET }
    }
}

impl Analyzed {
    pub fn new(prog: &Program) -> Result<Self> {
        Self::with_tie(prog, TieBreak::Ascending)
    }

    pub fn with_tie(prog: &Program, tie: TieBreak) -> Result<Self> {
        let graph = DependencyGraph::new(prog);
        let program = validate_declarations(prog, &graph)?;
        let decls = DeclTable::from_program(&program);
        let universe = Arc::new(Universe::for_program(&program)?);
        let completed = name_neg(&completion(&program, &decls));
        let plan = graph.scc_plan(tie);
        let ground_original = ground_rules(&program, universe.clone());
        let ground_completed = ground_rules(&completed, universe.clone());
        let comp = plan.component_of();
        let rule_component = ground_completed.rules.iter().map(|r| comp[universe.pred_of(r.head.atom)]).collect();
        let mut dnf: BTreeMap<AtomId, Vec<Vec<Hyp>>> = BTreeMap::new();
        for r in &ground_original.rules {
            if r.head.positive {
                dnf.entry(r.head.atom).or_default().extend(body_dnf(&r.body));
            }
        }
        Ok(Analyzed { program, graph, decls, universe, completed, plan, ground_original, ground_completed, rule_component, dnf })
    }

    pub fn parse(src: &str) -> Result<Self> {
        Self::new(&crate::parser::parse(src)?)
    }

    fn is_closed(&self, atom: AtomId) -> bool {
        self.decls.get(self.universe.pred_of(atom)).closed
    }

    /// Founded semantics ignoring closed declarations.
    pub fn founded0(&self) -> Result<Interpretation> {
        self.founded0_with(&Interpretation::empty(&self.universe), None)
    }

    /// Like [`Analyzed::founded0`], also reporting each SCC's LFP rounds.
    pub fn founded0_traced(&self) -> Result<(Interpretation, Vec<SccTrace>)> {
        let mut trace = Vec::new();
        let i = self.founded0_with(&Interpretation::empty(&self.universe), Some(&mut trace))?;
        Ok((i, trace))
    }

    /// Founded semantics without closed declarations of the program extended
    /// with the literals of `extra` as facts.
    ///
    /// A positive fact for an uncertain complete predicate becomes one more
    /// disjunct `V = c` of its combined rule, which falsifies the completion
    /// rule's instance at `c`; that instance is therefore skipped.
    pub fn founded0_with(&self, extra: &Interpretation, mut trace: Option<&mut Vec<SccTrace>>) -> Result<Interpretation> {
        let mut by_component: Vec<Vec<&GroundRule>> = vec![Vec::new(); self.plan.components.len()];
        for (r, &c) in self.ground_completed.rules.iter().zip(&self.rule_component) {
            let blocked = !r.head.positive && extra.truth(r.head.atom) == Truth::T;
            if !blocked {
                by_component[c].push(r);
            }
        }
        let mut extra_by_component: Vec<Vec<GroundLit>> = vec![Vec::new(); self.plan.components.len()];
        let comp = self.plan.component_of();
        for l in extra.literals() {
            extra_by_component[comp[self.universe.pred_of(l.atom)]].push(l);
        }

        let mut cur = Interpretation::empty(&self.universe);
        let err = |a| inconsistent(&self.universe, a);
        for (i, preds) in self.plan.components.iter().enumerate() {
            for l in &extra_by_component[i] {
                cur.insert(*l).map_err(err)?;
            }
            let mut sizes = Vec::new();
            loop {
                let step = one_step(&self.ground_completed, by_component[i].iter().copied(), &cur)?;
                let changed = cur.extend(&step).map_err(err)?;
                sizes.push(cur.literals().count());
                if !changed {
                    break;
                }
            }
            self.add_neg(&mut cur, preds)?;
            if let Some(t) = trace.as_deref_mut() {
                t.push(SccTrace { component: preds.clone(), sizes });
            }
        }
        Ok(cur)
    }

    /// Makes every atom of the certain predicates in `preds` that is not
    /// true false.
    pub fn add_neg(&self, interp: &mut Interpretation, preds: &[Pred]) -> Result<()> {
        for p in preds.iter().filter(|p| self.decls.get(p).certain) {
            for a in self.universe.atoms_of(p) {
                if interp.truth(a) != Truth::T {
                    interp.insert(GroundLit { atom: a, positive: false }).map_err(|a| inconsistent(&self.universe, a))?;
                }
            }
        }
        Ok(())
    }

    /// The greatest unfounded set of the program with respect to `interp`.
    pub fn self_false(&self, interp: &Interpretation) -> BTreeSet<AtomId> {
        let mut u: BTreeSet<AtomId> = BTreeSet::new();
        for p in self.decls.closed_preds() {
            u.extend(self.universe.atoms_of(p).filter(|a| interp.truth(*a) != Truth::T));
        }
        let prog = &self.ground_original;
        loop {
            let mut with_u = interp.clone();
            for a in &u {
                // Atoms of U are not true in `interp`, so this cannot clash.
                let _ = with_u.insert(GroundLit { atom: *a, positive: false });
            }
            let defeated = |hyps: &Vec<Hyp>| {
                hyps.iter().any(|h| match *h {
                    Hyp::Lit(l) => interp.lit_truth(l) == Truth::F || (l.positive && u.contains(&l.atom)),
                    Hyp::Cmp(c) => {
                        let c = prog.comparison(c);
                        let set = prog.set(c.set);
                        cmp_truth(c, set, interp) == Truth::F || derivable(&c.complement(), set, &with_u)
                    }
                })
            };
            let supported: Vec<AtomId> =
                u.iter().copied().filter(|a| self.dnf.get(a).is_some_and(|rules| !rules.iter().all(defeated))).collect();
            if supported.is_empty() {
                return u;
            }
            for a in supported {
                u.remove(&a);
            }
        }
    }

    /// The founded model.
    pub fn founded(&self) -> Result<Interpretation> {
        if !self.decls.has_closed() {
            return self.founded0();
        }
        let mut i = Interpretation::empty(&self.universe);
        loop {
            let mut next = self.founded0_with(&i, None)?;
            for a in self.self_false(&next) {
                next.insert(GroundLit { atom: a, positive: false }).map_err(|a| inconsistent(&self.universe, a))?;
            }
            if next == i {
                return Ok(i);
            }
            i = next;
        }
    }

    /// Constraint models extending `founded`, in ascending order of the
    /// assignment to its undefined atoms (the lowest-numbered atom is the
    /// least significant bit, and a set bit means true).
    pub fn constraint_models(&self, founded: &Interpretation, opts: EnumOptions) -> Result<ConstraintModels> {
        let undefined: Vec<AtomId> = founded.atoms_with(Truth::UD).collect();
        if undefined.len() > opts.budget {
            return Err(Error::BudgetExceeded { undefined: undefined.len(), budget: opts.budget });
        }
        let mut models = Vec::new();
        for mask in 0u64..(1u64 << undefined.len()) {
            if opts.limit.is_some_and(|l| models.len() >= l) {
                return Ok(ConstraintModels { models, truncated: true });
            }
            let mut m = founded.clone();
            for (bit, a) in undefined.iter().enumerate() {
                let _ = m.insert(GroundLit { atom: *a, positive: mask >> bit & 1 == 1 });
            }
            if self.is_constraint_model(&m) {
                models.push(m);
            }
        }
        Ok(ConstraintModels { models, truncated: false })
    }

    /// Whether a 2-valued `m` is a model of the completed program whose
    /// self-false atoms are all false.
    pub fn is_constraint_model(&self, m: &Interpretation) -> bool {
        check_model(&self.ground_completed, m) && self.self_false(m).iter().all(|a| m.truth(*a) == Truth::F)
    }

    /// Atoms of closed predicates.
    pub fn closed_atoms(&self) -> Vec<AtomId> {
        (0..self.universe.len() as AtomId).filter(|a| self.is_closed(*a)).collect()
    }
}

/// Whether `m` is a model of a ground program: every rule whose body is
/// true in `m` has its conclusion in `m`. Facts are rules with body
/// `true`, and comparisons are evaluated from `m` itself, so the
/// derivable comparisons are contained in `m` by construction.
pub fn check_model(prog: &GroundProgram, m: &Interpretation) -> bool {
    prog.rules.iter().all(|r| m.contains(r.head) || truth_of_body(&r.body, prog, m) != Truth::T)
}
