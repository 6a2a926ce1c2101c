//! End-to-end tests of the binary: exit codes, schema of emitted records,
//! determinism across reruns and thread counts, and golden outputs for a
//! few fixed invocations.
//!
//! Regenerate the golden files with `BLESS=1 cargo test -p burgess-cli`.

use std::path::PathBuf;
use std::process::{Command, Output};

fn burgess(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burgess"))
        .args(args)
        .env_remove("BURGESS_TAU_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("golden file {name} missing; run with BLESS=1"));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

#[test]
fn verify_suite_emits_schema_lines_and_exit_zero() {
    let out = burgess(&["verify", "--tuples", "2", "--seed", "7"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 12, "2 tuples x 6 suites");
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).expect("json line");
        for key in ["tag", "params", "lhs", "rhs", "abs_err", "rel_err", "pass"] {
            assert!(v.get(key).is_some(), "missing {key} in {line}");
        }
        assert_eq!(v["pass"], serde_json::Value::Bool(true));
        assert!(v["lhs"].as_array().unwrap().len() == 2);
    }
}

#[test]
fn verify_single_tag_filter() {
    let out = burgess(&["verify", "--tuples", "3", "--only", "reciprocity", "--seed", "9"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 3);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["tag"], "RECIPROCITY");
        assert_eq!(v["abs_err"], 0.0);
    }
}

#[test]
fn unknown_tag_is_usage_error() {
    let out = burgess(&["verify", "--only", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty(), "no partial output on usage errors");
}

#[test]
fn scan_weil_empty_range_is_usage_error() {
    let out = burgess(&["scan-weil", "--m-min", "8", "--m-max", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn lvalue_principal_character_is_usage_error() {
    let out = burgess(&["lvalue", "--m", "7", "--chi", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn determinism_across_reruns_and_thread_counts() {
    let base = burgess(&["scan-weil", "--m-max", "31", "--trials", "8", "--seed", "3"]);
    assert!(base.status.success());
    let again = burgess(&["scan-weil", "--m-max", "31", "--trials", "8", "--seed", "3"]);
    let threaded = burgess(&[
        "scan-weil", "--m-max", "31", "--trials", "8", "--seed", "3", "--threads", "4",
    ]);
    let single = burgess(&[
        "scan-weil", "--m-max", "31", "--trials", "8", "--seed", "3", "--threads", "1",
    ]);
    assert_eq!(stdout_of(&base), stdout_of(&again));
    assert_eq!(stdout_of(&base), stdout_of(&threaded));
    assert_eq!(stdout_of(&base), stdout_of(&single));
}

#[test]
fn seed_changes_output() {
    let a = burgess(&["scan-weil", "--m-max", "31", "--trials", "8", "--seed", "3"]);
    let b = burgess(&["scan-weil", "--m-max", "31", "--trials", "8", "--seed", "4"]);
    assert_ne!(stdout_of(&a), stdout_of(&b));
}

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = std::env::temp_dir().join("burgess-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gauss.jsonl");
    let out = burgess(&[
        "gauss",
        "--q",
        "13",
        "--chi",
        "all",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().count(), 12);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn tau_cache_environment_roundtrip() {
    let dir = std::env::temp_dir().join("burgess-cli-tau");
    std::fs::create_dir_all(&dir).unwrap();
    let cache = dir.join("tau.cache");
    let _ = std::fs::remove_file(&cache);
    let first = Command::new(env!("CARGO_BIN_EXE_burgess"))
        .args(["tau", "--n-max", "50", "--format", "csv"])
        .env("BURGESS_TAU_CACHE", &cache)
        .output()
        .unwrap();
    assert!(first.status.success());
    assert!(cache.exists(), "cache file created");
    let second = Command::new(env!("CARGO_BIN_EXE_burgess"))
        .args(["tau", "--n-max", "50", "--format", "csv"])
        .env("BURGESS_TAU_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.lines().any(|l| l == "2,-24"));
    assert!(text.lines().any(|l| l == "3,252"));
    std::fs::remove_file(&cache).unwrap();
}

#[test]
fn golden_gauss_record() {
    let out = burgess(&["gauss", "--q", "5", "--chi", "quadratic"]);
    assert!(out.status.success());
    check_golden("gauss_q5.jsonl", &stdout_of(&out));
}

#[test]
fn golden_reciprocity_suite() {
    let out = burgess(&["verify", "--tuples", "2", "--only", "reciprocity", "--seed", "11"]);
    assert!(out.status.success());
    check_golden("reciprocity_seed11.jsonl", &stdout_of(&out));
}

#[test]
fn golden_offdiag_tail() {
    let out = burgess(&["offdiag-tail", "--p", "8"]);
    assert!(out.status.success());
    check_golden("offdiag_p8.jsonl", &stdout_of(&out));
}

#[test]
fn golden_weil_scan_csv() {
    let out = burgess(&[
        "scan-weil", "--m-max", "19", "--trials", "5", "--seed", "1", "--format", "csv",
    ]);
    assert!(out.status.success());
    check_golden("weil_m19.csv", &stdout_of(&out));
}

#[test]
fn golden_burgess_scan_tsv() {
    let out = burgess(&[
        "scan-burgess",
        "--m-min",
        "100",
        "--m-max",
        "400",
        "--primes",
        "5",
        "--chars",
        "2",
        "--seed",
        "2",
        "--format",
        "tsv",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    // Two-column blocks: every data line is a pair of floats.
    for line in text.lines().filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols.len(), 2, "line {line}");
        for c in cols {
            c.parse::<f64>().expect("numeric column");
        }
    }
    check_golden("burgess_small.tsv", &text);
}

#[test]
fn lvalue_csv_format() {
    let out = burgess(&["lvalue", "--m", "13", "--chi", "quadratic", "--both", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "M,chi,re,im,abs,method");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("13,6,"));
}
