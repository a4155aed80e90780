use std::process::{Command, Output};

use serde_json::Value;

fn aru(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aru"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_reports_census() {
    let out = aru(&["classify", "--elements"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["census"]["involutions"], 63);
    assert_eq!(v["census"]["cube_roots"], 56);
    assert_eq!(v["elements"].as_array().unwrap().len(), 256);
}

#[test]
fn delta_and_dozens() {
    let v = json(&aru(&["delta"]));
    assert_eq!(v["count"], 28);
    assert_eq!(v["idempotent_pairs"], 36);
    let v = json(&aru(&["dozens"]));
    assert_eq!(v["count"], 63);
    assert_eq!(v["rank"], 7);
    assert!(v["dozens"].as_array().unwrap().iter().all(|d| d["members"].as_array().unwrap().len() == 12));
}

#[test]
fn character_formats() {
    let out = aru(&["character", "--max-degree", "2", "--max-charge", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("784") && text.contains("20475"));
    let out = aru(&["character", "--max-degree", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.contains("784")));
    let out = aru(&["character", "--max-degree", "1/3"]);
    assert!(!out.status.success());
}

#[test]
fn axioms_pass_for_one_pair() {
    let out = aru(&["axioms", "--pairs", "1", "--max-degree", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["max_degree"], "3");
}

#[test]
fn axioms_reject_large_truncation() {
    let out = aru(&["axioms", "--pairs", "1", "--max-degree", "7"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("too large"));
}

#[test]
fn verify_all_is_deterministic_and_degrades_without_lift() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["verify-all", "--cache-dir", cache, "--format", "json", "--no-timings"];
    let cold = aru(&args);
    let warm = aru(&args);
    assert_eq!(cold.stdout, warm.stdout);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 2);

    let v = json(&cold);
    let rows = v["rows"].as_array().unwrap();
    let ids: Vec<&str> = rows.iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["1", "2", "3", "4", "5", "6", "7", "8", "9", "10"]);
    assert!(rows.iter().all(|r| !r["anchor"].as_str().unwrap().is_empty()));
    let code = match v["overall"].as_str().unwrap() {
        "pass" => 0,
        "degraded" => 2,
        _ => 1,
    };
    assert_eq!(cold.status.code(), Some(code));
    assert_eq!(rows[5]["status"], "pass");

    let out = aru(&["verify-all", "--cache-dir", cache, "--format", "csv", "--lift", "none"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 11);
    let six = text.lines().find(|l| l.starts_with("6,")).unwrap();
    assert!(six.contains(",degraded,"));
}

#[test]
fn rho_coefficient_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("rho.txt");
    let lines: Vec<String> = (0..34).map(|k| format!("{} {}", k % 5 - 2, k % 3)).collect();
    std::fs::write(&good, lines.join("\n")).unwrap();
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let out = aru(&["invariants", "--cache-dir", cache, "--rho-coeffs", good.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["invariants"], 68);
    assert_eq!(v["complement_pairs"], 34);
    assert_eq!(v["rho_fixed"], true);
    assert_eq!(v["nu_fixed"], true);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 2\n3\n").unwrap();
    let out = aru(&["invariants", "--cache-dir", cache, "--rho-coeffs", bad.to_str().unwrap()]);
    assert!(!out.status.success());
}
