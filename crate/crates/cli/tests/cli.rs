use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn mbqg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbqg")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn shipped_bundles_check_clean() {
    for name in ["fix_1", "fix_k2", "fix_gr", "fix_z3", "fix_h4", "broken"] {
        let f = fixture(&format!("{name}.bundle"));
        let o = mbqg(&["check", path(&f)]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let r = report(&o);
        assert_eq!(r["summary"]["fail"], 0, "{name}");
        assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn left_covariance_of_the_broken_calculus_fails_with_a_witness() {
    let o = mbqg(&["covariance", path(&fixture("broken.bundle")), "--mode", "left"]);
    assert_eq!(code(&o), 1);
    let r = report(&o);
    let fail = r["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["id"] == "LEFT_COVARIANT" && e["status"] == "fail")
        .expect("a failing LEFT_COVARIANT entry");
    assert!(!fail["witness"].is_null());
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn bad_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.bundle");
    assert_eq!(code(&mbqg(&["check", path(&missing)])), 2);

    let text = std::fs::read_to_string(fixture("fix_k2.bundle")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["group"]["counit"][0][0] = serde_json::json!(0.5);
    let float = dir.path().join("float.bundle");
    std::fs::write(&float, v.to_string()).unwrap();
    let o = mbqg(&["check", path(&float)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("counit"));

    let o = mbqg(&["build-calculus", path(&fixture("fix_k2.bundle")), "--ideal", "nope", "-o", path(&missing)]);
    assert_eq!(code(&o), 2);
    let o = mbqg(&["covariance", path(&fixture("broken.bundle")), "--mode", "star"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = mbqg(&["--report", path(out), "check", path(&fixture("fix_z3.bundle"))]);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn built_calculus_checks_clean() {
    let dir = tempfile::tempdir().unwrap();
    for side in ["left", "right"] {
        let out = dir.path().join(format!("k2_{side}.bundle"));
        let o = mbqg(&["build-calculus", path(&fixture("fix_k2.bundle")), "--ideal", "zero", "--side", side, "-o", path(&out)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(text.contains(&format!("\"zero_{side}\"")));
        let o = mbqg(&["check", path(&out)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn derive_prints_the_flip() {
    let o = mbqg(&["derive", path(&fixture("fix_gr.bundle")), "--what", "tau"]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_eq!(v["map"], "tau");
    let rows: Vec<Vec<&str>> =
        v["matrix"].as_array().unwrap().iter().map(|r| r.as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect()).collect();
    assert_eq!(rows, [["1", "0", "0", "0"], ["0", "0", "1", "0"], ["0", "1", "0", "0"], ["0", "0", "0", "-1"]]);

    let o = mbqg(&["derive", path(&fixture("fix_h4.bundle")), "--what", "sigma-n", "-n", "-3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["n"], -3);
}

#[test]
fn complete_system_closes() {
    for name in ["fix_k2", "fix_gr", "fix_h4"] {
        let o = mbqg(&["complete-system", path(&fixture(&format!("{name}.bundle")))]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let r = report(&o);
        assert!(r["entries"].as_array().unwrap().iter().any(|e| e["id"] == "COMPLETION_CLOSED" && e["status"] == "pass"));
    }
}
