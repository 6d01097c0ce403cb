use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plueckerfan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn lattice_m3() {
    let v = json(&["lattice", "--kind", "M", "--n", "3"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 6);
    assert_eq!(v["covers"].as_array().unwrap().len(), 6);
}

#[test]
fn lattice_n4_matches_m4_shape() {
    let n = json(&["lattice", "--kind", "N", "--n", "4"]);
    let m = json(&["lattice", "--kind", "M", "--n", "4"]);
    assert_eq!(n["elements"].as_array().unwrap().len(), 14);
    assert_eq!(n["covers"].as_array().unwrap().len(), m["covers"].as_array().unwrap().len());
    let names: Vec<&str> = n["elements"].as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect();
    assert_eq!(names[0], "1");
    assert!(names.contains(&"4,2,3"));
}

#[test]
fn lattice_guards() {
    assert_eq!(code(&["lattice", "--n", "1"]), 2);
    assert_eq!(code(&["lattice", "--n", "13"]), 3);
    assert_eq!(code(&["lattice"]), 2);
}

#[test]
fn straighten_example_one() {
    let v = json(&["straighten", "--kind", "M", "--n", "4", "1,4 2,3"]);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
    let mut seen: Vec<(String, Value)> = terms
        .iter()
        .map(|t| (t["coeff"].as_str().unwrap().to_string(), t["factors"].clone()))
        .collect();
    seen.sort_by_key(|(_, f)| f.to_string());
    assert_eq!(seen[0].0, "1");
    assert_eq!(seen[0].1, serde_json::json!([[1, 2], [3, 4]]));
    assert_eq!(seen[1].0, "-1");
    assert_eq!(seen[2].0, "1");
}

#[test]
fn straighten_pbw_and_comparable() {
    let v = json(&["straighten", "--kind", "N", "--n", "3", "1,2", "3", "--oracle", "symbolic"]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
    assert_eq!(code(&["straighten", "--n", "3", "1", "1,2"]), 2);
    assert_eq!(code(&["straighten", "--n", "3", "1,5", "2"]), 2);
}

#[test]
fn cone_and_check_point() {
    let v = json(&["cone", "--target", "SSYT", "--n", "3"]);
    assert_eq!(v["target"], "SSYT");
    let ineqs = v["inequalities"].as_array().unwrap();
    assert_eq!(ineqs.len(), 2);
    assert!(ineqs.iter().all(|q| q["rel"] == "<"));
    let inside = json(&["check-point", "--target", "SSYT", "--n", "3", "--weights", "interior"]);
    assert_eq!(inside["member"], true);
    let zero = json(&["check-point", "--target", "SSYT", "--n", "3", "--weights", "zero"]);
    assert_eq!(zero["member"], false);
    let dir = tempfile::tempdir().unwrap();
    let w = write(
        dir.path(),
        "w.json",
        r#"{"1,2": 0, "1,3": 1, "1": "3", "2,3": 3, "2": 9, "3": "27"}"#,
    );
    let v = json(&["check-point", "--target", "SSYT", "--n", "3", "--weights", &w]);
    assert_eq!(v["member"], true);
    assert_eq!(json(&["cone", "--target", "pbw", "--n", "4"])["inequalities"].as_array().unwrap().len(), 8);
}

#[test]
fn polytope_actions() {
    let dir = tempfile::tempdir().unwrap();
    let poset = write(dir.path(), "p.json", r#"{"elements": ["p", "q"], "covers": [["p", "q"]]}"#);
    let v = json(&["polytope", "--poset", &poset, "--partition", "chain", "--t", "1", "--action", "points"]);
    assert_eq!(v["count"], 3);
    let v = json(&["polytope", "--poset", &poset, "--t", "0", "--action", "points"]);
    assert_eq!(v["count"], 1);
    assert_eq!(v["points"][0]["p"], "0");
    let v = json(&["polytope", "--poset", &poset, "--partition", "order", "--action", "hrep"]);
    let lines: Vec<&str> = v["inequalities"].as_array().unwrap().iter().map(|l| l.as_str().unwrap()).collect();
    assert!(lines.contains(&"-x[p] +x[q] <= 0"), "{lines:?}");
    let point = write(dir.path(), "x.json", r#"{"p": "2", "q": "1"}"#);
    let v = json(&["polytope", "--poset", &poset, "--t", "2", "--action", "decompose", "--point", &point]);
    assert_eq!(v["summands"].as_array().unwrap().len(), 2);
}

#[test]
fn facets_and_verify() {
    let v = json(&["facets", "--n", "4", "--target", "PBW"]);
    assert_eq!(v["ssyt"], 8);
    assert_eq!(v["witnesses"]["failed"].as_array().unwrap().len(), 0);
    assert_eq!(code(&["verify", "--suite", "counts", "--n", "6"]), 0);
    assert_eq!(code(&["verify", "--suite", "tau", "--n", "5"]), 0);
    assert_eq!(code(&["verify", "--suite", "nope"]), 2);
    let dir = tempfile::tempdir().unwrap();
    let ids: Vec<String> = (0..9).map(|i| format!("\"e{i}\"")).collect();
    let poset = write(dir.path(), "big.json", &format!(r#"{{"elements": [{}], "covers": []}}"#, ids.join(",")));
    assert_eq!(code(&["verify", "--suite", "ehrhart", "--poset", &poset]), 3);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cone.json");
    let out = out.to_string_lossy();
    for args in [
        vec!["cone", "--target", "PBW_REDUNDANT", "--n", "4"],
        vec!["pairs", "--kind", "N", "--n", "4"],
        vec!["straighten", "--kind", "N", "--n", "4", "1,4 4,2,3"],
    ] {
        let a = run(&args).stdout;
        let b = run(&args).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
    assert_eq!(code(&["cone", "--target", "HIBI", "--n", "4", "--format", "text", "--out", &out]), 0);
    let text = std::fs::read_to_string(&*out).unwrap();
    assert!(text.starts_with("HIBI n=4: 5 inequalities"), "{text}");
}
