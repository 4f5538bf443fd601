//! Declaration defaults and legality.

use std::collections::{BTreeMap, BTreeSet};

use crate::ast::{Certainty, Declaration, Pred, Program};
use crate::depgraph::DependencyGraph;
use crate::error::{Error, Result};

/// Resolved declaration of one predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeclInfo {
    pub certain: bool,
    pub complete: bool,
    pub closed: bool,
}

impl DeclInfo {
    pub const CERTAIN: DeclInfo = DeclInfo { certain: true, complete: false, closed: false };

    pub fn uncertain_complete(&self) -> bool {
        !self.certain && self.complete
    }
}

/// Resolved declarations for every predicate of a validated program.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeclTable(BTreeMap<Pred, DeclInfo>);

impl DeclTable {
    /// Reads the declarations of a program; predicates without one are
    /// treated as certain.
    pub fn from_program(prog: &Program) -> Self {
        let mut map = BTreeMap::new();
        for p in prog.predicates() {
            let info = match prog.declaration(&p) {
                Some(d) if d.certainty == Some(Certainty::Uncertain) => {
                    DeclInfo { certain: false, complete: d.complete.unwrap_or(true), closed: d.closed.unwrap_or(false) }
                }
                _ => DeclInfo::CERTAIN,
            };
            map.insert(p, info);
        }
        DeclTable(map)
    }

    pub fn get(&self, p: &Pred) -> DeclInfo {
        self.0.get(&p.base()).copied().unwrap_or(DeclInfo::CERTAIN)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Pred, &DeclInfo)> {
        self.0.iter()
    }

    pub fn closed_preds(&self) -> impl Iterator<Item = &Pred> {
        self.0.iter().filter(|(_, d)| d.closed).map(|(p, _)| p)
    }

    pub fn has_closed(&self) -> bool {
        self.0.values().any(|d| d.closed)
    }
}

fn decl_err(p: &Pred, msg: impl Into<String>) -> Error {
    Error::Declaration { pred: p.signature(), msg: msg.into() }
}

/// Resolves every predicate's declaration, filling in defaults and
/// rejecting illegal explicit ones. The result declares every predicate
/// exactly once and is a fixed point of this function.
pub fn validate_declarations(prog: &Program, dg: &DependencyGraph) -> Result<Program> {
    let mut explicit: BTreeMap<Pred, &Declaration> = BTreeMap::new();
    for d in &prog.declarations {
        if explicit.insert(d.pred.clone(), d).is_some() {
            return Err(decl_err(&d.pred, "declared more than once"));
        }
    }

    let preds = prog.predicates();
    let mut uncertain: BTreeSet<Pred> = preds
        .iter()
        .filter(|p| dg.circular_non_positive(p) || explicit.get(*p).is_some_and(|d| d.certainty == Some(Certainty::Uncertain)))
        .cloned()
        .collect();
    // Anything depending on an uncertain predicate is uncertain too.
    loop {
        let forced: Vec<Pred> =
            preds.iter().filter(|q| !uncertain.contains(*q) && uncertain.iter().any(|p| dg.depends_on(q, p))).cloned().collect();
        if forced.is_empty() {
            break;
        }
        uncertain.extend(forced);
    }

    let mut declarations = Vec::with_capacity(preds.len());
    for p in &preds {
        let d = explicit.get(p);
        let is_uncertain = uncertain.contains(p);
        if d.is_some_and(|d| d.certainty == Some(Certainty::Certain)) && is_uncertain {
            let why = if dg.circular_non_positive(p) {
                "cannot be certain: it has circular non-positive dependency".to_string()
            } else {
                let on = uncertain.iter().find(|u| *u != p && dg.depends_on(p, u)).map(Pred::signature).unwrap_or_default();
                format!("cannot be certain: it depends on uncertain predicate {on}")
            };
            return Err(decl_err(p, why));
        }
        let mut out = Declaration::new(p.clone());
        if is_uncertain {
            let complete = d.and_then(|d| d.complete).unwrap_or(true);
            let closed = d.and_then(|d| d.closed).unwrap_or(false);
            if closed && !complete {
                return Err(decl_err(p, "closed requires complete"));
            }
            out.certainty = Some(Certainty::Uncertain);
            out.complete = Some(complete);
            out.closed = Some(closed);
        } else {
            if d.is_some_and(|d| d.complete.is_some() || d.closed.is_some()) {
                return Err(decl_err(p, "complete and closed apply only to uncertain predicates"));
            }
            out.certainty = Some(Certainty::Certain);
        }
        declarations.push(out);
    }
    Ok(Program { rules: prog.rules.clone(), declarations })
}
