use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn blockforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockforge"))
        .env_remove("BLOCKFORGE_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = blockforge(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON record")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn pencil_construct_over_f7() {
    let v = json(&["pencil-construct", "--p", "7", "--r", "1", "--d", "3"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "pencil-construct");
    let r = &v["result"];
    assert!(r["S"].as_array().unwrap().len() <= 10);
    assert_eq!(r["bound"], 10);
    assert_eq!(r["report"]["is_blocking"], true);
    assert!(v.get("wall_time_ms").is_none());
}

#[test]
fn timing_is_opt_in() {
    let v = json(&["field-info", "--q", "9", "--timing"]);
    assert!(v["wall_time_ms"].as_f64().is_some());
}

#[test]
fn verify_empty_set() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("empty.json");
    std::fs::write(&file, "[]").unwrap();
    let v = json(&["verify", "--q", "7", "--points", path_str(&file)]);
    let report = &v["result"]["report"];
    assert_eq!(report["is_blocking"], false);
    assert_eq!(report["unblocked_count"], 57);
    assert!(!report["unblocked"].as_array().unwrap().is_empty());
    assert_eq!(report["unblocked_truncated"], false);
}

#[test]
fn verify_curves_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("curves.json");
    // x + y + z and x over F_2: together they meet every line.
    std::fs::write(&file, r#"[{"degree": 1, "coeffs": [1, 1, 1]}, {"degree": 1, "coeffs": [1, 0, 0]}]"#).unwrap();
    let v = json(&["verify", "--q", "2", "--curves", path_str(&file)]);
    assert_eq!(v["result"]["report"]["is_blocking"], true);
    assert_eq!(v["result"]["report"]["is_trivial"], true);
}

#[test]
fn conic_census_main_term() {
    let v = json(&["conic-skew-census", "--q", "101", "--ell", "3", "--seed", "1"]);
    let main = v["result"]["main_term"].as_f64().unwrap();
    assert!((main - 101.0 * 101.0 / 8.0).abs() < 1e-9);
    assert_eq!(v["result"]["all_have_common_skew"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(blockforge(&["pencil-construct", "--q", "6", "--d", "3"]).status.code(), Some(2));
    assert_eq!(blockforge(&["pencil-construct", "--q", "7", "--d", "1"]).status.code(), Some(2));
    assert_eq!(blockforge(&["pencil-mincover", "--q", "13", "--d", "3", "--budget", "10"]).status.code(), Some(3));
    assert_eq!(blockforge(&["field-info", "--q", "7", "--threads", "0"]).status.code(), Some(2));
    let pencil_t2 = blockforge(&["tfold-build", "--q", "13", "--d", "3", "--t", "2", "--seed", "0"]);
    assert_eq!(pencil_t2.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_still_writes_record() {
    let out = blockforge(&["pencil-mincover", "--q", "13", "--d", "3", "--budget", "10"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "pencil-mincover");
}

#[test]
fn csv_and_out_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("record.json");
    let csv = dir.path().join("table.csv");
    let status = blockforge(&[
        "stein-build", "--q", "25", "--d", "3", "--seed", "0",
        "--out", path_str(&out), "--csv", path_str(&csv),
    ]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["family"]["report"]["is_blocking"], true);
    let mut rows = csv::Reader::from_path(&csv).unwrap();
    assert!(rows.headers().unwrap().iter().any(|h| h == "q"));
    assert_eq!(rows.records().count(), 1);
}

#[test]
fn thread_env_var_does_not_change_output() {
    let args = ["chebotarev-census", "--q", "29", "--curve", "fermat:3"];
    let plain = blockforge(&args);
    let env = Command::new(env!("CARGO_BIN_EXE_blockforge"))
        .env("BLOCKFORGE_THREADS", "3")
        .args(args)
        .output()
        .unwrap();
    assert!(plain.status.success() && env.status.success());
    assert_eq!(plain.stdout, env.stdout);
}

#[test]
fn k_table_rows() {
    let v = json(&["k-table", "--qs", "5,7,8", "--d", "3", "--seed", "1"]);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["is_blocking"] == true));
}
