use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn leafavg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leafavg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("leafavg-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn ball_count() {
    let o = leafavg(&["ball", "--k", "2", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "52");
}

#[test]
fn thin_certificate_preset() {
    let o = leafavg(&["certificate", "--preset", "f2-thin", "--N", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["gap"].as_f64().unwrap() >= 0.49);
}

#[test]
fn unknown_flag_is_a_schema_error() {
    let o = leafavg(&["ball", "--k", "2", "--bogus", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_action_is_a_schema_error() {
    let o = leafavg(&["lambda", "--action", "spiral:2", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resource_cap_exit_code() {
    let o = leafavg(&["orbit", "--action", "free:2", "--n", "40"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn out_dir_gets_manifest() {
    let dir = scratch("manifest");
    let o = leafavg(&["lambda", "--action", "rotation:0.41421356237309503", "--n", "5", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["hypothesis_ok"], Value::Bool(true));
    let paths: Vec<&str> = m["artifacts"].as_array().unwrap().iter().map(|a| a["path"].as_str().unwrap()).collect();
    assert_eq!(paths, ["lambda.json", "lambda.csv"]);
    for p in paths {
        assert!(dir.join(p).exists());
    }
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn config_runs_the_same_command() {
    let dir = scratch("config");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("ball.json");
    std::fs::write(&cfg, r#"{"command":"ball","k":3,"n":2}"#).unwrap();
    let o = leafavg(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "36");

    std::fs::write(&cfg, r#"{"command":"ball","k":3,"n":2,"colour":"red"}"#).unwrap();
    let o = leafavg(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn plug_tree_roots() {
    let o = leafavg(&["plug-tree", "--n", "3", "--k", "5", "--r0", "7.5"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 5);
    assert_eq!(roots[0][1].as_f64(), Some(45.0));
}

#[test]
fn free_rank_one_folner() {
    let o = leafavg(&["folner", "--action", "free:1", "--word", "a1", "--n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["defect"].as_f64(), Some(0.2));
}

#[test]
fn rotation_average_matches_closed_form() {
    let o = leafavg(&["rotation-average", "--alpha", "0.7071067811865476", "--r", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c = v["closed_form"].as_f64().unwrap();
    let q = v["quadrature"]["value"].as_f64().unwrap();
    assert!((c - q).abs() < 1e-9, "{c} vs {q}");
}
