use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fanomotive"))
        .args(args)
        .env("FANOMOTIVE_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn lseries_table_ends_with_known_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["lseries", "--variety", "X73", "--bound", "31"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("n,a_n"));
    assert_eq!(out.lines().last(), Some("31,308"));
    assert!(dir.path().join("jacobi.json").exists());
}

#[test]
fn lseries_json_and_twist_override() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["lseries", "--variety", "E3", "--bound", "10", "--twist-override", "0", "--format", "json"], dir.path());
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["twist"], 0);
    assert_eq!(v["coefficients"][6], -1);
}

#[test]
fn qform_theta_leading_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["qform", "theta", "1", "1", "1", "--terms", "5", "--format", "csv"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().nth(1), Some("1/12,1"));
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn qform_scaled_power_recipe() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["qform", "--recipe", "theta(1,1,1)@3^4", "--terms", "3"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("q - 8q^4 + 20q^7"));
}

#[test]
fn hodge_table_for_quartic_fivefold() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["hodge", "X54"], dir.path());
    let out = stdout(&o);
    assert!(out.contains("4,1,1"));
    assert!(out.contains("3,2,90"));
}

#[test]
fn count_agrees_with_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["count", "--variety", "S6", "--field", "13", "--brute"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn invalid_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!run(&["qform", "theta", "1", "1"], dir.path()).status.success());
    assert!(!run(&["lseries", "--variety", "nope"], dir.path()).status.success());
    assert!(!run(&["verify", "I99"], dir.path()).status.success());
    assert!(!run(&["lseries", "--variety", "X73", "--format", "xml"], dir.path()).status.success());
}

#[test]
fn verify_all_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = run(&["verify", "all", "--output", path.to_str().unwrap()], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let strip = |p: &std::path::Path| {
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        for r in v["reports"].as_array_mut().unwrap() {
            r["timing_ms"] = Value::from(0);
        }
        v
    };
    let (ra, rb) = (strip(&a), strip(&b));
    assert_eq!(ra, rb);
    assert_eq!(ra["status"], "pass");
    let ids: Vec<&str> = ra["reports"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["I1", "I2", "I3", "I4", "I5", "I6", "I7", "I8", "I9"]);
    assert_eq!(ra["config_hash"].as_str().unwrap().len(), 64);
}

const CORRUPTED: &str = r#"
[[identity]]
id = "Z1"
description = "sevenfold against the wrong power of the character"
left = "motive(X73)"
right = "hecke(psi27,2)"
domain = "good-supported"
bound = 50
"#;

#[test]
fn corrupted_identity_fails_with_first_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, CORRUPTED).unwrap();
    let o = run(&["--config", config.to_str().unwrap(), "verify", "Z1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let check = &v["reports"][0]["checks"][0];
    assert_eq!(v["status"], "fail");
    assert_eq!(check["first_mismatch"]["index"], 4);
}

const CUSTOM: &str = r#"
[settings]
brute_budget = 10000000

[[variety]]
name = "C3"
weights = [1, 1, 1]
exponents = [3, 3, 3]
degree = 3
coefficients = [1, 1, 2]
hodge = [[1, 0, 1], [0, 1, 1]]

[[identity]]
id = "C1"
left = "motive(C3)"
right = "brute(C3)"
domain = "good-primes"
bound = 60

[[identity]]
id = "C2"
kind = "hodge"
variety = "C3"
"#;

#[test]
fn custom_config_identities_pass() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("custom.toml");
    std::fs::write(&config, CUSTOM).unwrap();
    for id in ["C1", "C2"] {
        let o = run(&["--config", config.to_str().unwrap(), "verify", id], dir.path());
        assert!(o.status.success(), "{id}: {}", stdout(&o));
    }
}
