use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_etcon"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn etcon");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str], stdin: &str) -> String {
    let o = run(args, stdin);
    assert!(
        o.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

fn error_kind(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).expect("error document on stderr");
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn hypersimplex_pipeline_flags() {
    let p = ok(&["generate", "simplex", "-d", "4"], "");
    let e = ok(&["et", "-t", "1"], &p);
    assert_eq!(ok(&["flags"], &e).trim(), "10 30 30 10 ; f03=50");
}

#[test]
fn realized_24_cell_is_2s2s() {
    let p = ok(&["generate", "cube", "-d", "4"], "");
    let q = ok(&["realize", "--t", "2", "--r2", "2"], &p);
    let report: Value = serde_json::from_str(&ok(&["check", "--2s2s"], &q)).unwrap();
    assert_eq!(report["passed"], Value::Bool(true));
    assert_eq!(ok(&["flags"], &q).trim(), "24 96 96 24 ; f03=144");
}

#[test]
fn non_graded_input_fails() {
    let doc = r#"{"length":2,"elements":[
        {"id":0,"rank":0,"covers":[]},
        {"id":1,"rank":2,"covers":[0]}],"bottom":0,"top":1}"#;
    let o = run(&["check", "--eulerian"], doc);
    assert!(!o.status.success());
    assert_eq!(error_kind(&o), "NotGraded");
}

#[test]
fn failed_certification_exits_nonzero() {
    // the 4-cube is simple but not 2-simplicial
    let p = ok(&["generate", "cube", "-d", "4"], "");
    let o = run(&["check", "--2s2s"], &p);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passed"], Value::Bool(false));
}

#[test]
fn zero_denominator_is_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let l = dir.path().join("l.json");
    std::fs::write(&l, ok(&["generate", "cube", "-d", "3"], "")).unwrap();
    let o = run(
        &["subdivide", "--lattice", l.to_str().unwrap(), "-t", "1"],
        r#"{"chain":[0],"weights":["1/0"]}"#,
    );
    assert!(!o.status.success());
    assert_eq!(error_kind(&o), "ParseError");
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["field"], "weights");
}

#[test]
fn subdivide_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let l = dir.path().join("l.json");
    std::fs::write(&l, ok(&["generate", "cube", "-d", "3"], "")).unwrap();
    let lp = l.to_str().unwrap();
    let point = r#"{"chain":[1],"weights":["1"]}"#;
    let up = ok(&["subdivide", "--lattice", lp, "-t", "1", "--direction", "pi-inverse"], point);
    let back = ok(&["subdivide", "--lattice", lp, "-t", "1", "--direction", "pi"], &up);
    let v: Value = serde_json::from_str(&back).unwrap();
    assert_eq!(v["chain"], serde_json::json!([1]));
    assert_eq!(v["weights"], serde_json::json!(["1"]));
}

#[test]
fn iso_of_et_boundary_case() {
    let dir = tempfile::tempdir().unwrap();
    let cube = ok(&["generate", "cube", "-d", "4"], "");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    std::fs::write(&a, &cube).unwrap();
    std::fs::write(&b, ok(&["et", "-t", "3"], &cube)).unwrap();
    let o = run(&["iso", a.to_str().unwrap(), b.to_str().unwrap()], "");
    assert!(o.status.success());
    let c = dir.path().join("c.json");
    std::fs::write(&c, ok(&["et", "-t", "0"], &cube)).unwrap();
    let o = run(&["iso", a.to_str().unwrap(), c.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn truncation_strategies() {
    let cross = ok(&["generate", "cross", "-d", "4"], "");
    let d1 = ok(&["truncate", "--strategy", "midpoint"], &cross);
    assert_eq!(ok(&["flags"], &d1).trim(), "24 96 96 24 ; f03=144");

    let d1 = ok(
        &["truncate", "--strategy", "inductive", "--base", "simplex", "-d", "4", "--plan", "0"],
        "",
    );
    assert_eq!(ok(&["flags"], &d1).trim(), "14 48 48 14 ; f03=76");
}

#[test]
fn cross_stack_cut_system_truncates() {
    let dir = tempfile::tempdir().unwrap();
    let cuts = dir.path().join("cuts.json");
    let p = ok(
        &["generate", "cross-stack", "-n", "3", "--cuts-out", cuts.to_str().unwrap()],
        "",
    );
    let o = run(&["truncate", "--strategy", "midpoint"], &p);
    assert_eq!(error_kind(&o), "CutInvariantViolated");
    let d1 = ok(&["truncate", "--cuts", cuts.to_str().unwrap()], &p);
    assert_eq!(ok(&["flags"], &d1).trim(), "60 264 264 60 ; f03=384");
}

#[test]
fn outputs_are_deterministic() {
    let a = ok(&["generate", "cross-stack", "-n", "2"], "");
    let b = ok(&["generate", "cross-stack", "-n", "2"], "");
    assert_eq!(a, b);
    assert_eq!(ok(&["tables"], ""), ok(&["tables"], ""));
}

#[test]
fn tables_check_passes() {
    let t = ok(&["tables", "--check"], "");
    assert!(t.starts_with("family\tparameter\ttuple\tsource\n"));
    assert!(t.contains("D1C\tn=42\t(762,3540,3540,762;5064)"));
    assert!(!t.contains("FAIL"));
    let j: Value = serde_json::from_str(&ok(&["tables", "--format", "json"], "")).unwrap();
    assert!(j["rows"].as_array().unwrap().len() > 20);
}

#[test]
fn dk_top_is_opposite() {
    let dir = tempfile::tempdir().unwrap();
    let cube = ok(&["generate", "cube", "-d", "3"], "");
    let cross = dir.path().join("cross.json");
    let dk = dir.path().join("dk.json");
    std::fs::write(&cross, ok(&["generate", "cross", "-d", "3"], "")).unwrap();
    std::fs::write(&dk, ok(&["dk", "-k", "2"], &cube)).unwrap();
    let o = run(&["iso", cross.to_str().unwrap(), dk.to_str().unwrap()], "");
    assert!(o.status.success());
}

#[test]
fn bad_t_is_reported() {
    let p = ok(&["generate", "simplex", "-d", "3"], "");
    let o = run(&["et", "-t", "7"], &p);
    assert_eq!(error_kind(&o), "BadT");
}
