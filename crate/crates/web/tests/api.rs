//! The browser-facing functions, run natively.

use foundalog_web::{check_json, evaluate_json, examples_json};
use serde_json::Value;

const CORRELATED: &str = "p(1). p(3) :- count {X: p(X)} >= 2. p(2) :- count {X: p(X)} >= 2.";

fn strings(v: &Value) -> Vec<&str> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect()
}

#[test]
fn toggling_a_declaration_changes_the_result() {
    let certain = evaluate_json(CORRELATED, "", "both", 10);
    assert_eq!(strings(&certain["report"]["founded"]["true"]), ["p(1)"]);
    assert_eq!(certain["declarations"][0]["pred"], "p/1");
    assert_eq!(certain["declarations"][0]["certain"], true);

    let uncertain = evaluate_json(CORRELATED, "p/1=uncertain", "both", 10);
    assert_eq!(strings(&uncertain["report"]["founded"]["undefined"]), ["p(2)", "p(3)"]);
    assert_eq!(uncertain["report"]["constraint_models"].as_array().unwrap().len(), 2);

    let closed = evaluate_json(CORRELATED, "p/1=uncertain\np/1=uncertain,closed", "both", 10);
    assert_eq!(strings(&closed["report"]["founded"]["false"]), ["p(2)", "p(3)"]);
    assert_eq!(closed["declarations"][0]["closed"], true);
}

#[test]
fn semantics_selection() {
    let founded = evaluate_json(CORRELATED, "", "founded", 10);
    assert!(founded["report"].get("constraint_models").is_none());
    let constraint = evaluate_json(CORRELATED, "", "constraint", 10);
    assert!(constraint["report"].get("founded").is_none());
    assert!(evaluate_json(CORRELATED, "", "stable", 10)["error"].is_string());
}

#[test]
fn errors_are_reported_as_json() {
    assert!(evaluate_json("p(X) :- q(Y).", "", "both", 10)["error"].is_string());
    let e = evaluate_json("p('a') :- count {X: p(X)} = 1.", "p/1=certain", "both", 10);
    assert!(e["error"].as_str().unwrap().contains("p/1"), "{e}");
    assert_eq!(check_json("p('a') :- count {X: p(X)} = 1.", "")["declarations"][0]["may_be_certain"], false);
    assert!(check_json("p(", "")["error"].is_string());
}

#[test]
fn examples_cover_the_corpus() {
    let ex = examples_json();
    let list = ex.as_array().unwrap();
    assert_eq!(list.len(), 18);
    for v in list {
        let overrides: Vec<&str> = strings(&v["declare"]);
        let r = evaluate_json(v["source"].as_str().unwrap(), &overrides.join(";"), "both", 8);
        assert!(r.get("error").is_none(), "{}: {r}", v["name"]);
    }
}
