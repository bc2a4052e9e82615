//! End-to-end runs of the binary: exit codes, files, config overlay.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kakeya-lab"))
        .args(args)
        .env_remove("KAKEYA_LAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn poly_count_prints_the_scalar() {
    let out = bin(&["poly", "count", "--n", "3", "--q", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "26");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bin(&["kakeya", "build", "--bogus"]).status.code(), Some(2));
    assert_eq!(bin(&["kakeya", "build", "--q", "6"]).status.code(), Some(2));
    assert_eq!(bin(&["kakeya", "verify", "--in", "/nonexistent/x.txt"]).status.code(), Some(2));
    assert_eq!(bin(&["poly", "count", "--n", "3", "--q", "3", "--m", "two"]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("tiny.txt");
    fs::write(&f, "3 3 points\n0 0 0\n").unwrap();
    let out = bin(&["kakeya", "verify", "--in", p(&f)]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["rows"][0]["status"], "fail");
    assert_eq!(r["rows"][0]["detail"]["missing_examples"][0], serde_json::json!(["0", "0", "1"]));
}

#[test]
fn build_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("qr7.txt");
    let out = bin(&["kakeya", "build", "--q", "7", "--out", p(&set)]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&set).unwrap();
    assert!(text.starts_with("7 3 points\n"));
    assert_eq!(text.lines().count(), 1 + 145);

    let out = bin(&["kakeya", "verify", "--in", p(&set)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"][0]["detail"]["size"], 145);
}

#[test]
fn nikodym_family_and_incidence_files() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("conic.txt");
    let out = bin(&["nikodym", "conic-family", "--q", "5", "--out", p(&lines)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&lines).unwrap();
    assert!(text.starts_with("5 3 lines\n"));
    assert_eq!(text.lines().count(), 1 + 87);

    let full = dir.path().join("full.txt");
    let mut body = String::from("5 3 points\n");
    for x in 0..5 {
        for y in 0..5 {
            for z in 0..5 {
                body.push_str(&format!("{x} {y} {z}\n"));
            }
        }
    }
    fs::write(&full, body).unwrap();
    let out = bin(&["incidence", "check", "--points", p(&full), "--lines", p(&lines)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let witness = dir.path().join("w.json");
    let out = bin(&["nikodym", "verify", "--in", p(&full), "--extract-witness", p(&witness)]);
    assert_eq!(out.status.code(), Some(0));
    let w: Value = serde_json::from_str(&fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!(w["assignment"].as_array().unwrap().len(), 0);

    let mismatched = dir.path().join("q3.txt");
    fs::write(&mismatched, "3 3 points\n0 0 0\n").unwrap();
    let out = bin(&["incidence", "check", "--points", p(&mismatched), "--lines", p(&lines)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_fills_unset_flags_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# defaults\nq = 5\nconstruction = qr\n").unwrap();

    let out = bin(&["--config", p(&cfg), "kakeya", "build"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["config"]["params"]["q"], "5");

    let out = bin(&["--config", p(&cfg), "kakeya", "build", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["config"]["params"]["q"], "3");
}

#[test]
fn csv_report_has_header_and_rows() {
    let out = bin(&["--format", "csv", "incidence", "spectrum", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rd.headers().unwrap(), vec!["kind", "id", "claim", "status", "detail"]);
    let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
    assert!(rows.iter().any(|r| &r[0] == "row" && &r[3] == "pass"));
}

#[test]
fn report_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, workers) in [(&a, "1"), (&b, "4")] {
        let out = bin(&["--workers", workers, "--report", p(path), "suite", "--max-q", "5", "--seed", "9"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let timing = dir.path().join("a.json.timing.json");
    let t: Value = serde_json::from_str(&fs::read_to_string(timing).unwrap()).unwrap();
    assert!(t["total_ms"].as_f64().unwrap() >= 0.0);
}
