use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meroconn")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn derham_reports_dimensions() {
    let v = json(&["derham", &data("half-residue.json")]);
    assert_eq!((v["h0"].as_u64(), v["h1"].as_u64()), (Some(0), Some(0)));
    assert_eq!(v["certificate"], "spectrum-derived");
    let v = json(&["fredholm", &data("bv-b0.json")]);
    assert_eq!(v["chi"], 0);
}

#[test]
fn explicit_window() {
    let v = json(&["derham", "--window", "-3:3", &data("half-residue.json")]);
    assert_eq!(v["window"], serde_json::json!([-3, 3]));
    assert_eq!(v["stabilized"], false);
}

#[test]
fn reduce_writes_tree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tree.json");
    let status = run(&["reduce", &data("bv-b1.json"), "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["tree"]["kind"], "NilpotentShear");
    assert_eq!(v["tree"]["alpha"], "1/4");
    assert_eq!(v["tree"]["shear"]["exponents"], serde_json::json!(["-1/4", "1/4"]));
}

#[test]
fn gauge_applies() {
    let v = json(&["gauge", &data("bv-b0.json"), &data("shift-gauge.json")]);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["pole_order"], 2);
}

#[test]
fn stability_constants() {
    let v = json(&["stability", "1", "7"]);
    assert_eq!(v["stability_constant"], 0);
    let v = json(&["stability", "2", "2"]);
    assert_eq!(v["stability_constant"], 4);
    assert_eq!(v["known_sharp"], 1);
}

#[test]
fn generate_then_derham() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let p = out.to_str().unwrap();
    assert_eq!(code(&["generate", "--count", "1", "--rank", "2", "--pole", "2", "--kind", "invertible", "--seed", "5", "--out", p]), 0);
    let v = json(&["derham", p]);
    assert_eq!((v["h0"].as_u64(), v["h1"].as_u64()), (Some(0), Some(0)));
}

#[test]
fn check_suite_passes() {
    assert_eq!(code(&["check", "cbh", "--count", "5"]), 0);
    assert_eq!(code(&["check", "no-such-suite"]), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["derham", &data("truncated.json")]), 2);
    assert_eq!(code(&["derham", &data("lambda-residue.json")]), 3);
    assert_eq!(code(&["reduce", &data("lambda-residue.json")]), 0);
    assert_eq!(code(&["gauge", &data("half-residue.json"), &data("shift-gauge.json")]), 1);
    assert_eq!(code(&["derham", "does-not-exist.json"]), 4);
    assert_eq!(code(&["stability", "0", "2"]), 4);
    assert_eq!(code(&["bogus"]), 4);
    assert_eq!(code(&["derham", "--window", "3:1", &data("half-residue.json")]), 4);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"rank\": 2, ").unwrap();
    assert_eq!(code(&["derham", bad.to_str().unwrap()]), 4);
    std::fs::write(&bad, r#"{"rank": 1, "ramification": 1, "precision": null, "field": {"levels": []}, "coefficients": [{"exp": -1, "matrix": [["x"]]}]}"#).unwrap();
    assert_eq!(code(&["derham", bad.to_str().unwrap()]), 4);
}

#[test]
fn precision_flag_truncates() {
    assert_eq!(code(&["derham", "--precision", "-1", &data("bv-b0.json")]), 2);
}
