//! End-to-end tests against the built binary: exit codes, report shape,
//! and worker-count independence of the survey digest.

use std::process::{Command, Output};

fn ecb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecb"))
        .args(args)
        .env_remove("ECB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_success() {
    let out = ecb(&["classify", "--a", "3", "--b", "1", "--prime", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["disc_min"], "-2160");
    assert_eq!(v["height"], "108");
    assert_eq!(v["local"]["reduction"], "multiplicative split");
    assert_eq!(v["local"]["disc_valuation"], 1);
    assert_eq!(v["local"]["l_invariant_ord1"], true);
    assert_eq!(v["family"]["s0"], true);
    assert_eq!(v["family"]["s1_prime"], true);
    assert_eq!(v["family"]["s1"], true);
    assert_eq!(v["factorization"]["sign"], -1);
}

#[test]
fn classify_negative_coefficients() {
    let out = ecb(&["classify", "--a", "-2", "--b", "1", "--prime", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["height"], "32");
}

#[test]
fn domain_errors_exit_2() {
    let out = ecb(&["classify", "--a", "16", "--b", "64", "--prime", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "non_minimal_model");

    let out = ecb(&["classify", "--a", "0", "--b", "0", "--prime", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "singular_curve");

    let out = ecb(&["classify", "--a", "1", "--b", "1", "--prime", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "unsupported_prime");
}

#[test]
fn usage_errors_exit_1() {
    let out = ecb(&["classify", "--a", "x", "--b", "1", "--prime", "5"]);
    assert_eq!(out.status.code(), Some(1));

    let out = ecb(&["classify", "--a", "1"]);
    assert_eq!(out.status.code(), Some(1));

    let out = ecb(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));

    let out = ecb(&["scenario", "--bound", "3/8", "--kappa", "nope", "--density", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let out = ecb(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = ecb(&["survey", "--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn survey_digest_worker_independent() {
    let one = ecb(&["survey", "--max-height", "50000", "--prime", "5", "--workers", "1"]);
    let three = ecb(&["survey", "--max-height", "50000", "--prime", "5", "--workers", "3"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(three.status.code(), Some(0));
    let (a, b) = (stdout_json(&one), stdout_json(&three));
    assert_eq!(a["digest"], b["digest"]);
    assert_eq!(a["counters"], b["counters"]);
    assert_eq!(a["workers"], 1);
    assert_eq!(b["workers"], 3);
}

#[test]
fn survey_respects_env_worker_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_ecb"))
        .args(["survey", "--max-height", "1000", "--prime", "5"])
        .env("ECB_WORKERS", "4")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["workers"], 4);

    let bad = Command::new(env!("CARGO_BIN_EXE_ecb"))
        .args(["survey", "--max-height", "1000", "--prime", "5"])
        .env("ECB_WORKERS", "zero")
        .output()
        .expect("binary runs");
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn survey_writes_out_file() {
    let dir = std::env::temp_dir().join(format!("ecb-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = ecb(&[
        "survey",
        "--max-height",
        "28",
        "--prime",
        "5",
        "--workers",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["counters"]["total"], 8);
    assert_eq!(v["counters"]["good_supersingular"], 2);
    assert_eq!(v["counters"]["skipped_singular"], 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn tables_contain_pinned_values() {
    let out = ecb(&["densities", "--truncation", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("39062500/48828120"));
    assert!(text.contains("0.8000000819"));
    assert!(text.contains("0.791805"));

    let out = ecb(&["bounds", "--prime", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for needle in ["3/8", "19/40", "19/24", "7/8"] {
        assert!(text.contains(needle), "{needle}");
    }
    assert!(!text.contains("DISAGREES"));

    let out = ecb(&["headline"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0.6648174"));
    assert!(text.contains("0.1650300"));
    assert!(text.contains("0.2068867"));

    let out = ecb(&[
        "scenario",
        "--bound",
        "3/8",
        "--kappa",
        "0.5501",
        "--density",
        "non-additive-5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("19.8"));
}
