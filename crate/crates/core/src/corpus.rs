//! Regression corpus of worked examples under declaration variants.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::parser::parse;
use crate::report::{apply_override, evaluate, EvalOptions, Report, SemanticsChoice};

const BUNDLED: &[(&str, &str)] = &[
    ("manifest.toml", include_str!("../corpus/manifest.toml")),
    ("expected.json", include_str!("../corpus/expected.json")),
    ("self_count.fl", include_str!("../corpus/self_count.fl")),
    ("seminar.fl", include_str!("../corpus/seminar.fl")),
    ("need_ta.fl", include_str!("../corpus/need_ta.fl")),
    ("graduate.fl", include_str!("../corpus/graduate.fl")),
    ("circuit.fl", include_str!("../corpus/circuit.fl")),
    ("correlated_counts.fl", include_str!("../corpus/correlated_counts.fl")),
    ("double_win.fl", include_str!("../corpus/double_win.fl")),
    ("double_win_draw.fl", include_str!("../corpus/double_win_draw.fl")),
];

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct Variant {
    pub name: String,
    pub program: String,
    #[serde(default)]
    pub declare: Vec<String>,
    pub max_models: Option<usize>,
}

#[derive(Debug, Deserialize)]
struct Manifest {
    variant: Vec<Variant>,
}

/// A corpus: variants, their program sources and the pinned reports.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub variants: Vec<Variant>,
    pub sources: BTreeMap<String, String>,
    pub expected: BTreeMap<String, Report>,
}

fn load_error(msg: String) -> Error {
    Error::Corpus(msg)
}

impl Corpus {
    pub fn bundled() -> Corpus {
        let files: BTreeMap<String, String> = BUNDLED.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        Corpus::from_files(|name| files.get(name).cloned().ok_or_else(|| load_error(format!("missing {name}"))))
            .expect("bundled corpus is well formed")
    }

    pub fn from_dir(dir: &Path) -> Result<Corpus> {
        Corpus::from_files(|name| fs::read_to_string(dir.join(name)).map_err(|e| load_error(format!("{}: {e}", dir.join(name).display()))))
    }

    fn from_files(read: impl Fn(&str) -> Result<String>) -> Result<Corpus> {
        let manifest: Manifest = toml::from_str(&read("manifest.toml")?).map_err(|e| load_error(format!("manifest.toml: {e}")))?;
        let expected: BTreeMap<String, Report> =
            serde_json::from_str(&read("expected.json")?).map_err(|e| load_error(format!("expected.json: {e}")))?;
        let mut sources = BTreeMap::new();
        for v in &manifest.variant {
            if !sources.contains_key(&v.program) {
                sources.insert(v.program.clone(), read(&v.program)?);
            }
        }
        Ok(Corpus { variants: manifest.variant, sources, expected })
    }

    /// Evaluates one variant under both semantics.
    pub fn run(&self, v: &Variant) -> Result<Report> {
        let mut prog = parse(&self.sources[&v.program])?;
        for d in &v.declare {
            apply_override(&mut prog, d)?;
        }
        let opts = EvalOptions { max_models: v.max_models.unwrap_or(EvalOptions::default().max_models), ..Default::default() };
        Ok(evaluate(&prog, &opts)?.report(SemanticsChoice::Both))
    }

    /// Runs every variant and compares it with its pinned report.
    pub fn check(&self) -> Vec<Outcome> {
        self.variants
            .iter()
            .map(|v| {
                let diff = match (self.run(v), self.expected.get(&v.name)) {
                    (Err(e), _) => vec![format!("error: {e}")],
                    (Ok(_), None) => vec!["no expected report".to_string()],
                    (Ok(got), Some(want)) => diff_reports(want, &got),
                };
                Outcome { name: v.name.clone(), diff }
            })
            .collect()
    }

    /// Reports of every variant, for pinning.
    pub fn bless(&self) -> Result<BTreeMap<String, Report>> {
        self.variants.iter().map(|v| Ok((v.name.clone(), self.run(v)?))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub name: String,
    pub diff: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.diff.is_empty()
    }
}

fn diff_list(label: &str, want: &[String], got: &[String], out: &mut Vec<String>) {
    for w in want.iter().filter(|w| !got.contains(w)) {
        out.push(format!("- {label} {w}"));
    }
    for g in got.iter().filter(|g| !want.contains(g)) {
        out.push(format!("+ {label} {g}"));
    }
}

/// Literal-level differences, `-` for expected only and `+` for actual only.
pub fn diff_reports(want: &Report, got: &Report) -> Vec<String> {
    let mut out = Vec::new();
    let empty = Vec::new();
    let pick = |r: &Report| r.founded.clone();
    match (pick(want), pick(got)) {
        (Some(w), Some(g)) => {
            diff_list("true", &w.true_atoms, &g.true_atoms, &mut out);
            diff_list("false", &w.false_atoms, &g.false_atoms, &mut out);
            diff_list("undefined", &w.undefined, &g.undefined, &mut out);
        }
        (None, None) => {}
        _ => out.push("founded model present in only one report".to_string()),
    }
    let show = |m: &Vec<String>| format!("{{{}}}", m.join(", "));
    let wm: Vec<String> = want.constraint_models.as_ref().unwrap_or(&empty).iter().map(show).collect();
    let gm: Vec<String> = got.constraint_models.as_ref().unwrap_or(&empty).iter().map(show).collect();
    diff_list("model", &wm, &gm, &mut out);
    if want.truncated != got.truncated {
        out.push(format!("- truncated {:?}", want.truncated));
        out.push(format!("+ truncated {:?}", got.truncated));
    }
    out
}
