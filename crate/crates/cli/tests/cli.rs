use std::process::{Command, Output};

use serde_json::Value;
use witnesskit_cli::StateFile;

fn witnesskit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witnesskit")).args(args).env_remove("WITNESSKIT_THREADS").output().unwrap()
}

fn report(args: &[&str]) -> Value {
    let out = witnesskit(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn singlet_analysis() {
    let r = report(&["analyze", "catalog:singlet"]);
    let results = &r["body"]["results"];
    assert!((results["pt_min_eigenvalue"].as_f64().unwrap() + 0.5).abs() < 1e-9);
    let ppt = &results["verdicts"][0];
    assert_eq!(ppt["criterion"], "ppt");
    assert_eq!(ppt["status"], "entangled-certified");
    assert!(ppt["tolerance_used"].is_number());
}

#[test]
fn shifts_report_has_three_ppt_cuts_and_a_certificate() {
    let r = report(&["analyze", "catalog:shifts", "--seed", "3"]);
    let results = &r["body"]["results"];
    assert_eq!(results["cut_report"]["summary"]["ppt_cuts"].as_array().unwrap().len(), 3);
    assert_eq!(results["nondistillability"]["certified"], true);
    assert_eq!(results["nondistillability"]["classification"], "bound-entangled");
    assert_eq!(r["body"]["settings"]["seed"], 3);
}

#[test]
fn single_cut_and_criteria_subset() {
    let r = report(&["analyze", "catalog:ghz:n=3", "--cut", "B|AC", "--criteria", "ppt,rank"]);
    let verdicts = r["body"]["results"]["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 2);
    assert_eq!(r["body"]["results"]["cut"], "B|AC");
    let out = witnesskit(&["analyze", "catalog:singlet", "--criteria", "ppt,bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn theta_witness_plan() {
    let r = report(&["witness", "catalog:bell-theta:theta=0.7853981633974483", "--method", "pure"]);
    let terms = r["body"]["results"]["measurement_plan"]["terms"].as_array().unwrap();
    let coeff = |p: &str| terms.iter().find(|t| t["pauli"] == p).unwrap()["coeff"].as_f64().unwrap();
    assert_eq!(terms.len(), 4);
    assert!((coeff("II") - 0.25).abs() < 1e-12);
    assert!((coeff("YY") - 0.25).abs() < 1e-12);
    assert!((coeff("XX") + 0.25).abs() < 1e-12);
    assert!((coeff("ZZ") + 0.25).abs() < 1e-12);
}

#[test]
fn isotropic_lowdim_detects() {
    let r = report(&["witness", "catalog:isotropic:n=2,p=0.5", "--method", "lowdim"]);
    assert!(r["body"]["results"]["value"].as_f64().unwrap() < 0.0);
    let out = witnesskit(&["witness", "catalog:isotropic:n=3,p=0.5", "--method", "lowdim"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!out.stderr.is_empty());
}

#[test]
fn bell_values() {
    let r = report(&["bell", "catalog:singlet"]);
    assert!(r["body"]["results"]["value"].as_f64().unwrap() >= 2.828);
    assert_eq!(r["body"]["results"]["separable_bound"], 2.0);
    let r = report(&["bell", "catalog:ghz:n=3", "--restarts", "5"]);
    assert!(r["body"]["results"]["value"].as_f64().unwrap() >= 3.999);
    assert_eq!(witnesskit(&["bell", "catalog:werner"]).status.code(), Some(4));
}

#[test]
fn catalog_output() {
    let werner = witnesskit(&["catalog", "werner", "--n", "3", "--lambda", "2"]);
    let f = StateFile::parse(&String::from_utf8(werner.stdout).unwrap()).unwrap();
    assert_eq!(f.dims, vec![3, 3]);
    let shifts = witnesskit(&["catalog", "shifts"]);
    let f = StateFile::parse(&String::from_utf8(shifts.stdout).unwrap()).unwrap();
    assert_eq!(f.dims, vec![2, 2, 2]);
    let unknown = witnesskit(&["catalog", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("shifts"));
}

#[test]
fn catalog_to_file_round_trip_keeps_the_digest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let path_str = path.to_str().unwrap();
    assert!(witnesskit(&["catalog", "w", "--out", path_str]).status.success());
    let from_file = report(&["analyze", path_str]);
    let direct = report(&["analyze", "catalog:w"]);
    assert_eq!(from_file["body"]["input"]["digest"], direct["body"]["input"]["digest"]);
    assert_eq!(from_file["body"], direct["body"]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let non_herm = dir.path().join("h.json");
    std::fs::write(
        &non_herm,
        r#"{"dims": [2], "matrix": [[{"re": 0.5, "im": 0}, {"re": 0.3, "im": 0}], [{"re": 0, "im": 0}, {"re": 0.5, "im": 0}]]}"#,
    )
    .unwrap();
    let unknown_field = dir.path().join("u.json");
    std::fs::write(&unknown_field, r#"{"dims": [2], "vector": [], "extra": 1}"#).unwrap();
    let h = non_herm.to_str().unwrap();
    assert_eq!(witnesskit(&["analyze", h]).status.code(), Some(3));
    assert_eq!(witnesskit(&["analyze", unknown_field.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(witnesskit(&["analyze", "/nonexistent/state.json"]).status.code(), Some(2));
    assert_eq!(witnesskit(&["witness", "catalog:singlet", "--method", "magic"]).status.code(), Some(2));
    assert_eq!(witnesskit(&["witness", "catalog:werner", "--method", "pure"]).status.code(), Some(4));
    assert_eq!(witnesskit(&["analyze", "catalog:singlet", "--cut", "A|C"]).status.code(), Some(2));
}

#[test]
fn thread_cap_does_not_change_the_body() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_witnesskit"))
            .args(["witness", "catalog:shifts", "--method", "indecomposable", "--seed", "2", "--restarts", "4"])
            .env("WITNESSKIT_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice::<Value>(&out.stdout).unwrap()["body"].clone()
    };
    assert_eq!(run("1"), run("4"));
    let bad = Command::new(env!("CARGO_BIN_EXE_witnesskit"))
        .args(["analyze", "catalog:singlet"])
        .env("WITNESSKIT_THREADS", "-3")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
