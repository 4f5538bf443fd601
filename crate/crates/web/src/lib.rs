//! Browser bindings.
//!
//! Each export takes and returns plain strings so the page needs no
//! generated types: programs and declaration overrides go in, JSON comes
//! out. The `*_json` functions hold the logic and run natively in tests.

use foundalog::corpus::Corpus;
use foundalog::report::{apply_override, evaluate as run, EvalOptions, SemanticsChoice};
use foundalog::semantics::Analyzed;
use foundalog::{parse, Program};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Overrides are separated by `;` or newlines, e.g. `p/1=uncertain,closed`.
fn program_with(src: &str, overrides: &str) -> foundalog::Result<Program> {
    let mut prog = parse(src)?;
    for spec in overrides.split([';', '\n']).map(str::trim).filter(|s| !s.is_empty()) {
        apply_override(&mut prog, spec)?;
    }
    Ok(prog)
}

fn declarations(a: &Analyzed) -> Value {
    let preds: Vec<Value> = a
        .decls
        .iter()
        .map(|(p, d)| {
            json!({
                "pred": format!("{}/{}", p.name, p.arity),
                "certain": d.certain,
                "complete": d.complete,
                "closed": d.closed,
                // A predicate in a cycle through a non-positive dependency
                // cannot be declared certain.
                "may_be_certain": !a.graph.circular_non_positive(p),
            })
        })
        .collect();
    Value::Array(preds)
}

fn semantics_of(name: &str) -> Result<SemanticsChoice, String> {
    match name {
        "founded" => Ok(SemanticsChoice::Founded),
        "constraint" => Ok(SemanticsChoice::Constraint),
        "both" | "" => Ok(SemanticsChoice::Both),
        other => Err(format!("unknown semantics `{other}`")),
    }
}

/// Evaluates `src` with declaration overrides. The result has the resolved
/// declarations and the report; an error is returned as `{"error": ...}`.
pub fn evaluate_json(src: &str, overrides: &str, semantics: &str, max_models: usize) -> Value {
    let result = (|| -> Result<Value, String> {
        let sem = semantics_of(semantics)?;
        let prog = program_with(src, overrides).map_err(|e| e.to_string())?;
        let opts = EvalOptions { semantics: sem, max_models: max_models.max(1), ..EvalOptions::default() };
        let eval = run(&prog, &opts).map_err(|e| e.to_string())?;
        let report = serde_json::to_value(eval.report(sem)).map_err(|e| e.to_string())?;
        Ok(json!({ "declarations": declarations(&eval.analyzed), "report": report }))
    })();
    result.unwrap_or_else(|e| json!({ "error": e }))
}

/// Validates `src` and lists its predicates with resolved declarations.
pub fn check_json(src: &str, overrides: &str) -> Value {
    match program_with(src, overrides).and_then(|p| Analyzed::new(&p)) {
        Ok(a) => json!({ "declarations": declarations(&a), "atoms": a.universe.len() }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// The bundled corpus: each variant with its program source and overrides.
pub fn examples_json() -> Value {
    let c = Corpus::bundled();
    let variants: Vec<Value> =
        c.variants.iter().map(|v| json!({ "name": v.name, "source": c.sources[&v.program], "declare": v.declare })).collect();
    Value::Array(variants)
}

#[wasm_bindgen]
pub fn evaluate(src: &str, overrides: &str, semantics: &str, max_models: usize) -> String {
    evaluate_json(src, overrides, semantics, max_models).to_string()
}

#[wasm_bindgen]
pub fn check(src: &str, overrides: &str) -> String {
    check_json(src, overrides).to_string()
}

#[wasm_bindgen]
pub fn examples() -> String {
    examples_json().to_string()
}
