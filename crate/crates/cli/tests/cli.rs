use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const RING: &str = "p=2; vars x:1 y:1;";

fn kt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kt"))
        .current_dir(dir)
        .env_remove("KT_NCAP")
        .env_remove("KT_UCAP")
        .env_remove("KT_WINDOW")
        .args(args)
        .output()
        .expect("kt runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn workspace() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("r.txt"), RING).unwrap();
    fs::write(dir.path().join("X.json"), r#"{"twists": {"0": [0], "1": [-1]}, "maps": {"1": [["x"]]}}"#).unwrap();
    fs::write(dir.path().join("Q.json"), r#"{"quotient": ["x"]}"#).unwrap();
    fs::write(dir.path().join("f.json"), r#"{"source": [0], "target": [0], "matrix": [["1"]]}"#).unwrap();
    dir
}

#[test]
fn koszul_twists() {
    let dir = workspace();
    let v = json_of(&kt(dir.path(), &["koszul", "--ring", "r.txt", "--elems", "x,y", "--json"]));
    assert_eq!(v["twists"]["0"], serde_json::json!([0]));
    assert_eq!(v["twists"]["1"], serde_json::json!([-1, -1]));
    assert_eq!(v["twists"]["2"], serde_json::json!([-2]));
}

#[test]
fn output_is_canonical_and_round_trips() {
    let dir = workspace();
    let first = kt(dir.path(), &["koszul", "--ring", RING, "--elems", "x,x*y", "--json"]);
    let again = kt(dir.path(), &["koszul", "--ring", RING, "--elems", "x,x*y", "--json"]);
    assert_eq!(first.stdout, again.stdout);
    fs::write(dir.path().join("K.json"), &first.stdout).unwrap();
    // resolving a free complex returns it unchanged
    let res = json_of(&kt(dir.path(), &["resolve", "--ring", "r.txt", "--complex", "K.json", "--json"]));
    let text = serde_json::to_string_pretty(&res["complex"]).unwrap() + "\n";
    assert_eq!(text.as_bytes(), first.stdout.as_slice());
}

#[test]
fn homology_of_an_acyclic_complex_is_zero() {
    let dir = workspace();
    fs::write(dir.path().join("acyclic.json"), r#"{"twists": {"0": [0], "1": [0]}, "maps": {"1": [["1"]]}}"#).unwrap();
    let v = json_of(&kt(dir.path(), &["homology", "--ring", "r.txt", "--complex", "acyclic.json", "--window=-3:3", "--json"]));
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 14);
    assert!(recs.iter().all(|r| r["dim"] == 0));
}

#[test]
fn lift_reports_u_and_verification() {
    let dir = workspace();
    let v = json_of(&kt(dir.path(), &["lift", "--ring", "r.txt", "--elems", "x,y", "--r", "2", "--json"]));
    assert_eq!(v["u"], 2);
    assert_eq!(v["verified"], true);
    assert!(v["maps"].is_object());
}

#[test]
fn localcoh_records() {
    let dir = workspace();
    let args = ["localcoh", "--ring", "r.txt", "--elems", "x,y", "--i", "2", "--window=-5:-2", "--json"];
    let v = json_of(&kt(dir.path(), &args));
    let dims: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, [4, 3, 2, 1]);
    assert!(v.as_array().unwrap().iter().all(|r| r["stable"] == true && r["i"] == 2));
}

#[test]
fn window_from_env_and_config() {
    let dir = workspace();
    let count = |out: &Output| json_of(out).as_array().unwrap().len();
    let base = ["homology", "--ring", "r.txt", "--complex", "X.json", "--json"];
    fs::write(dir.path().join("kt.json"), r#"{"window": "0:0"}"#).unwrap();
    assert_eq!(count(&kt(dir.path(), &base)), 2);
    let env = Command::new(env!("CARGO_BIN_EXE_kt")).current_dir(dir.path()).env("KT_WINDOW", "0:2").args(base).output().unwrap();
    assert_eq!(count(&env), 6);
    let mut flagged = base.to_vec();
    flagged.push("--window=0:1");
    let flag = Command::new(env!("CARGO_BIN_EXE_kt")).current_dir(dir.path()).env("KT_WINDOW", "0:2").args(&flagged).output().unwrap();
    assert_eq!(count(&flag), 4);
}

#[test]
fn reduce_then_verify() {
    let dir = workspace();
    let out = kt(dir.path(), &["reduce", "--ring", "r.txt", "--complex", "X.json", "--support", "x", "--target", "Q.json", "--map", "f.json", "--out", "sr"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("sr/report.json")).unwrap()).unwrap();
    assert_eq!(report["holds"], true);
    let check = ["verify-sr", "--ring", "r.txt", "--complex", "X.json", "--target", "Q.json", "--map", "f.json", "--t", "sr/T.json", "--alpha", "sr/alpha.json", "--json"];
    let v = json_of(&kt(dir.path(), &check));
    assert_eq!(v["holds"], true);
}

#[test]
fn verify_rejects_a_zero_alpha() {
    let dir = workspace();
    fs::write(
        dir.path().join("alpha.json"),
        r#"{"source": {"twists": {"0": [0], "1": [-1]}, "maps": {"1": [["x"]]}},
            "target": {"twists": {"0": [0], "1": [-1]}, "maps": {"1": [["x"]]}},
            "maps": {}}"#,
    )
    .unwrap();
    let out = kt(dir.path(), &["verify-sr", "--ring", "r.txt", "--complex", "X.json", "--target", "Q.json", "--map", "f.json", "--t", "X.json", "--alpha", "alpha.json", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["clauses"]["epimorphism"], false);
}

#[test]
fn exit_codes() {
    let dir = workspace();
    assert_eq!(kt(dir.path(), &["koszul", "--ring", "r.txt", "--elems", "x+"]).status.code(), Some(1));
    assert_eq!(kt(dir.path(), &["nonsense"]).status.code(), Some(1));
    fs::write(dir.path().join("bad.json"), r#"{"twists": {"0": [0], "1": [-1], "2": [-2]}, "maps": {"1": [["x"]], "2": [["x"]]}}"#).unwrap();
    let bad = kt(dir.path(), &["stats", "--ring", "r.txt", "--complex", "bad.json"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("validation failed"));
    let capped = kt(dir.path(), &["lift", "--ring", "r.txt", "--elems", "x,x*y", "--r", "2", "--ucap", "1"]);
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("tate_to_koszul_lift"));
}

#[test]
fn grade_pd_perfect_frobenius() {
    let dir = workspace();
    let r = "p=2; vars x:1 y:1 z:1;";
    let v = json_of(&kt(dir.path(), &["perfect", "--ring", r, "--ideal", "x*y, x*z", "--json"]));
    assert_eq!((v["grade"].clone(), v["pd"].clone(), v["perfect"].clone()), (1.into(), 2.into(), false.into()));
    let v = json_of(&kt(dir.path(), &["frobenius", "--ring", "r.txt", "--ideal", "x,y", "--e-max", "2", "--json"]));
    assert_eq!(v["pds"], serde_json::json!([2, 2, 2]));
    assert_eq!(v["invariant"], true);
}

#[test]
fn accept_single_criterion() {
    let dir = workspace();
    let out = kt(dir.path(), &["accept", "--criterion", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("criterion  1  PASS"));
}
