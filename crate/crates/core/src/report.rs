//! Evaluation entry point and its text and JSON renderings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ast::{Declaration, Pred, Program};
use crate::error::{Error, Result};
use crate::eval::{Interpretation, Truth};
use crate::ground::{AtomId, GroundAtom};
use crate::oracle::{OAtom, OInterp, Oracle};
use crate::parser::apply_declaration_word;
use crate::semantics::{Analyzed, ConstraintModels, EnumOptions, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemanticsChoice {
    Founded,
    Constraint,
    #[default]
    Both,
}

impl SemanticsChoice {
    fn founded(self) -> bool {
        self != SemanticsChoice::Constraint
    }

    fn constraint(self) -> bool {
        self != SemanticsChoice::Founded
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalOptions {
    pub semantics: SemanticsChoice,
    pub max_models: usize,
    pub budget: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { semantics: SemanticsChoice::Both, max_models: 1000, budget: DEFAULT_BUDGET }
    }
}

/// Applies a `p/1=uncertain,complete,closed` override, replacing any
/// declaration of `p/1` in the program. `not-complete` and `not-closed`
/// negate the keyword.
pub fn apply_override(prog: &mut Program, spec: &str) -> Result<()> {
    let bad = |msg: String| Error::Declaration { pred: spec.to_string(), msg };
    let (sig, words) = spec.split_once('=').ok_or_else(|| bad("expected NAME/ARITY=KEYWORDS".into()))?;
    let (name, arity) = sig.trim().split_once('/').ok_or_else(|| bad("expected NAME/ARITY".into()))?;
    let arity: usize = arity.parse().map_err(|_| bad(format!("bad arity `{arity}`")))?;
    let pred = Pred::new(name, arity);
    let mut decl = Declaration::new(pred.clone());
    for w in words.split(',').map(str::trim).filter(|w| !w.is_empty()) {
        let (word, negated) = match w.strip_prefix("not-").or_else(|| w.strip_prefix("not ")) {
            Some(rest) => (rest, true),
            None => (w, false),
        };
        apply_declaration_word(&mut decl, word, negated).map_err(bad)?;
    }
    prog.declarations.retain(|d| d.pred != pred);
    prog.declarations.push(decl);
    Ok(())
}

/// The result of evaluating a program.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// The program as given, after declaration overrides.
    pub input: Program,
    pub analyzed: Analyzed,
    pub founded: Interpretation,
    pub models: Option<ConstraintModels>,
}

pub fn evaluate(prog: &Program, opts: &EvalOptions) -> Result<Evaluation> {
    let analyzed = Analyzed::new(prog)?;
    let founded = analyzed.founded()?;
    let models = if opts.semantics.constraint() {
        let limit = Some(opts.max_models.max(1));
        Some(analyzed.constraint_models(&founded, EnumOptions { limit, budget: opts.budget })?)
    } else {
        None
    };
    Ok(Evaluation { input: prog.clone(), analyzed, founded, models })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundedReport {
    #[serde(rename = "true")]
    pub true_atoms: Vec<String>,
    #[serde(rename = "false")]
    pub false_atoms: Vec<String>,
    pub undefined: Vec<String>,
}

/// The JSON shape of an evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub founded: Option<FoundedReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint_models: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated: Option<bool>,
}

impl Evaluation {
    fn sorted(&self, ids: impl Iterator<Item = AtomId>) -> Vec<GroundAtom> {
        let mut v: Vec<GroundAtom> = ids.map(|a| self.analyzed.universe.atom(a)).collect();
        v.sort();
        v
    }

    fn strings(&self, ids: impl Iterator<Item = AtomId>) -> Vec<String> {
        self.sorted(ids).iter().map(ToString::to_string).collect()
    }

    /// Models as sorted lists of true atoms, in sorted order.
    fn model_lists(&self) -> Option<Vec<Vec<GroundAtom>>> {
        self.models.as_ref().map(|ms| {
            let mut v: Vec<Vec<GroundAtom>> = ms.models.iter().map(|m| self.sorted(m.atoms_with(Truth::T))).collect();
            v.sort();
            v
        })
    }

    pub fn report(&self, semantics: SemanticsChoice) -> Report {
        let founded = semantics.founded().then(|| FoundedReport {
            true_atoms: self.strings(self.founded.atoms_with(Truth::T)),
            false_atoms: self.strings(self.founded.atoms_with(Truth::F)),
            undefined: self.strings(self.founded.atoms_with(Truth::UD)),
        });
        let constraint_models = self
            .model_lists()
            .filter(|_| semantics.constraint())
            .map(|ms| ms.iter().map(|m| m.iter().map(ToString::to_string).collect()).collect());
        let truncated = self.models.as_ref().filter(|_| semantics.constraint()).map(|m| m.truncated);
        Report { founded, constraint_models, truncated }
    }

    /// Human-readable rendering. False atoms of certain predicates are the
    /// complement of the true ones and are left out unless `show_false`.
    pub fn text(&self, semantics: SemanticsChoice, show_false: bool) -> String {
        let mut out = String::new();
        if semantics.founded() {
            out.push_str("founded model\n");
            let certain = |a: &AtomId| self.analyzed.decls.get(self.analyzed.universe.pred_of(*a)).certain;
            let falses: Vec<AtomId> = self.founded.atoms_with(Truth::F).collect();
            let hidden = if show_false { 0 } else { falses.iter().filter(|a| certain(a)).count() };
            let shown_false = falses.iter().copied().filter(|a| show_false || !certain(a));
            let sections = [
                ("true", self.sorted(self.founded.atoms_with(Truth::T))),
                ("false", self.sorted(shown_false)),
                ("undefined", self.sorted(self.founded.atoms_with(Truth::UD))),
            ];
            for (name, atoms) in sections {
                let _ = writeln!(out, "  {name}:");
                if atoms.is_empty() && !(name == "false" && hidden > 0) {
                    let _ = writeln!(out, "    (none)");
                }
                for a in atoms {
                    let _ = writeln!(out, "    {a}");
                }
                if name == "false" && hidden > 0 {
                    let _ = writeln!(out, "    ({hidden} false atoms of certain predicates hidden; use --show-false)");
                }
            }
        }
        if let (true, Some(ms), Some(models)) = (semantics.constraint(), self.model_lists(), &self.models) {
            let more = if models.truncated { ", truncated" } else { "" };
            let _ = writeln!(out, "constraint models: {}{more}", ms.len());
            for m in ms {
                let atoms: Vec<String> = m.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "  {{{}}}", atoms.join(", "));
            }
        }
        out
    }

    /// Differences between this evaluation and the brute-force oracle, as
    /// human-readable lines; empty when they agree.
    pub fn oracle_diff(&self) -> Result<Vec<String>> {
        let oracle = Oracle::new(&self.input)?;
        let mut diffs = Vec::new();
        let expected = oracle.founded()?;
        let actual = to_oracle(&self.analyzed, &self.founded);
        for a in oracle.all_atoms() {
            let (e, g) = (expected.get(&a), actual.get(&a));
            if e != g {
                diffs.push(format!("founded {}: oracle {}, engine {}", show(&a), truth_name(e), truth_name(g)));
            }
        }
        if let Some(ms) = &self.models {
            if !ms.truncated {
                let want: BTreeSet<BTreeSet<OAtom>> = oracle.constraint_models()?.into_iter().collect();
                let got: BTreeSet<BTreeSet<OAtom>> = ms
                    .models
                    .iter()
                    .map(|m| to_oracle(&self.analyzed, m).into_iter().filter(|(_, v)| *v).map(|(a, _)| a).collect())
                    .collect();
                for m in want.difference(&got) {
                    diffs.push(format!("constraint model only in oracle: {}", show_set(m)));
                }
                for m in got.difference(&want) {
                    diffs.push(format!("constraint model only in engine: {}", show_set(m)));
                }
            }
        }
        Ok(diffs)
    }
}

/// Engine interpretation as an oracle interpretation.
pub fn to_oracle(analyzed: &Analyzed, i: &Interpretation) -> OInterp {
    i.literals()
        .map(|l| {
            let g = analyzed.universe.atom(l.atom);
            ((g.pred.name.to_string(), g.args), l.positive)
        })
        .collect()
}

fn truth_name(v: Option<&bool>) -> &'static str {
    match v {
        Some(true) => "T",
        Some(false) => "F",
        None => "UD",
    }
}

fn show(a: &OAtom) -> String {
    let args: Vec<String> = a.1.iter().map(ToString::to_string).collect();
    if args.is_empty() {
        a.0.clone()
    } else {
        format!("{}({})", a.0, args.join(", "))
    }
}

fn show_set(m: &BTreeSet<OAtom>) -> String {
    format!("{{{}}}", m.iter().map(show).collect::<Vec<_>>().join(", "))
}
