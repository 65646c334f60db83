use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const PARAMS: &str = r#"{"p":5,"q":5,"d":4,"n":2,"N":32}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framedef")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

fn gen(dir: &Path, name: &str, seed: &str, eig: &str) -> PathBuf {
    let path = dir.join(name);
    let o = run(&["--params", PARAMS, "--seed", seed, "--out", path.to_str().unwrap(), "gen", "--eigenvalues", eig]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    path
}

fn connect(dir: &Path, point: &Path) -> PathBuf {
    let path = dir.join("cert.json");
    let o = run(&["--params", PARAMS, "--out", path.to_str().unwrap(), "connect", point.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_trivial_labels_classify_to_zero() {
    let dir = TempDir::new().unwrap();
    let pt = gen(dir.path(), "pt.json", "1", "0,0");
    let o = run(&["--params", PARAMS, "classify", pt.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(text(&o).contains("component label: 0"));
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = gen(dir.path(), "a.json", "9", "3,1");
    let b = gen(dir.path(), "b.json", "9", "3,1");
    let c = gen(dir.path(), "c.json", "10", "3,1");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn check_accepts_generated_point() {
    let dir = TempDir::new().unwrap();
    let pt = gen(dir.path(), "pt.json", "2", "4,2");
    let o = run(&["--params", PARAMS, "check", pt.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("residual valuation"));
}

#[test]
fn check_rejects_corrupted_entry() {
    let dir = TempDir::new().unwrap();
    let pt = gen(dir.path(), "pt.json", "2", "4,2");
    let mut v = read_json(&pt);
    // M₂[0][1] += π
    let entry = &mut v["matrices"][1][0][1];
    *entry = serde_json::json!({"shift": 1, "digits": ["1", "0", "0", "0"]});
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let o = run(&["--params", PARAMS, "check", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", text(&o));
}

#[test]
fn truncated_json_is_malformed() {
    let dir = TempDir::new().unwrap();
    let pt = gen(dir.path(), "pt.json", "2", "1,1");
    let s = std::fs::read_to_string(&pt).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, &s[..s.len() / 2]).unwrap();
    for cmd in ["check", "connect", "verify"] {
        let o = run(&["--params", PARAMS, cmd, bad.to_str().unwrap()]);
        assert_eq!(code(&o), 2, "{cmd}: {}", text(&o));
    }
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(code(&run(&["count", "--n", "x"])), 2);
    assert_eq!(code(&run(&["--params", r#"{"p":4,"q":4,"d":2,"n":2,"N":32}"#, "gen", "--eigenvalues", "0,0"])), 2);
}

#[test]
fn connect_then_verify() {
    let dir = TempDir::new().unwrap();
    let pt = gen(dir.path(), "pt.json", "5", "2,2");
    let cert = connect(dir.path(), &pt);
    let o = run(&["verify", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("certificate verified"));
}

#[test]
fn edited_certificate_names_the_clause() {
    let dir = TempDir::new().unwrap();
    let pt = gen(dir.path(), "pt.json", "5", "2,2");
    let cert = connect(dir.path(), &pt);
    let mut v = read_json(&cert);
    let segs = v["segments"].as_array_mut().unwrap();
    let cited = segs.iter_mut().find(|s| s["kind"] == "cited").expect("cited segment");
    cited["payload"]["statement"] = Value::from("some-other-statement");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let o = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", text(&o));
    assert!(text(&o).contains("clause (e)"), "{}", text(&o));
}

#[test]
fn connect_outside_v_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let pt = gen(dir.path(), "pt.json", "5", "2,2");
    let mut v = read_json(&pt);
    // M₃ = I + π E₀₁ leaves the relation intact (M₄ = I) but leaves V.
    v["matrices"][2][0][1] = serde_json::json!({"shift": 1, "digits": ["1", "0", "0", "0"]});
    let bad = dir.path().join("off.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(code(&run(&["--params", PARAMS, "check", bad.to_str().unwrap()])), 0);
    let o = run(&["--params", PARAMS, "connect", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", text(&o));
}

#[test]
fn count_small_fields_and_ring() {
    let o = run(&["count", "--n", "1", "--p", "3", "--q", "3", "--fields", "1,2,3", "--rings", "2"]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let out = String::from_utf8_lossy(&o.stdout);
    let json: Value = serde_json::from_str(&out[out.find('{').unwrap()..]).unwrap();
    let counts: Vec<u64> = json["rows"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, [2, 8, 26, 18]);
}

#[test]
fn count_budget_exceeded_exits_four() {
    let o = run(&["count", "--n", "2", "--p", "3", "--q", "3", "--fields", "2", "--brute", "--budget", "1000"]);
    assert_eq!(code(&o), 4, "{}", text(&o));
}

#[test]
fn crystalline_labels_cover_z_mod_q() {
    let o = run(&["--params", PARAMS, "crystalline", "--j-count", "4"]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let out = String::from_utf8_lossy(&o.stdout);
    let json: Value = serde_json::from_str(&out[out.find('{').unwrap()..]).unwrap();
    let labels: Vec<u64> = json["rows"].as_array().unwrap().iter().map(|r| r["label"].as_u64().unwrap()).collect();
    assert_eq!(labels, [3, 4, 0, 1, 2]);
}

#[test]
fn emitted_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let pt = gen(dir.path(), "pt.json", "11", "4,0");
    let cert = connect(dir.path(), &pt);
    let point: framed_deformations::deformation::PointFile =
        serde_json::from_str(&std::fs::read_to_string(&pt).unwrap()).unwrap();
    assert_eq!(serde_json::to_value(&point).unwrap(), read_json(&pt));
    let c: framed_deformations::paths::CertificateFile =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(serde_json::to_value(&c).unwrap(), read_json(&cert));
    let rebuilt = c.to_certificate().unwrap().to_file();
    assert_eq!(serde_json::to_value(&rebuilt).unwrap(), read_json(&cert));
}
