//! Drives the `qmsd` binary end to end.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qutrit_msd::pipeline::{read_report_json, CSV_HEADER};
use qutrit_msd::stabilizer::parse_stabilizer;
use qutrit_msd::{EnumeratorKind, WeightEnumerator};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmsd")).args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Copies the named fixtures into a fresh directory.
fn fixture_dir(names: &[&str]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for name in names {
        std::fs::copy(fixture(name), dir.path().join(name)).unwrap();
    }
    dir
}

#[test]
fn wenum_methods_agree() {
    let code = fixture("golay-dual.code");
    let naive = stdout_of(&["wenum", path(&code), "--method", "naive"]);
    let fast = stdout_of(&["wenum", path(&code), "--method", "fast"]);
    assert_eq!(naive, fast);
    let a = WeightEnumerator::parse(&fast).unwrap();
    assert_eq!((a.n, a.k, a.kind), (11, 1, EnumeratorKind::A));
}

#[test]
fn wenum_writes_to_file_and_round_trips_through_macwilliams() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("rep3.wenum");
    let b_path = dir.path().join("rep3-b.wenum");
    let back_path = dir.path().join("rep3-back.wenum");
    stdout_of(&["wenum", path(&fixture("rep3.code")), "--out", path(&a_path)]);
    let a_text = std::fs::read_to_string(&a_path).unwrap();
    assert_eq!(a_text, "WENUM v1\nn=3 k=1 kind=A\n0 1\n3 8\n");
    stdout_of(&["macwilliams", path(&a_path), "--out", path(&b_path)]);
    let b = WeightEnumerator::parse(&std::fs::read_to_string(&b_path).unwrap()).unwrap();
    assert_eq!(b.coeffs_u64(), vec![1, 0, 24, 56]);
    stdout_of(&["macwilliams", path(&b_path), "--out", path(&back_path)]);
    assert_eq!(std::fs::read_to_string(&back_path).unwrap(), a_text);
}

#[test]
fn complete_enumerator_lists_symbol_counts() {
    let text = stdout_of(&["wenum", path(&fixture("rep3.code")), "--complete"]);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(body[0].starts_with("n=3 terms="));
    let total: u64 = body[1..].iter().map(|l| l.split_whitespace().last().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 9);
    // The identity contributes y_00^3.
    assert!(body.contains(&"3 0 0 0 0 0 0 0 0 1"));
}

#[test]
fn fast_path_refuses_quantum_input_and_small_caps() {
    let out = run(&["wenum", path(&fixture("pair21.stab")), "--method", "fast"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["wenum", path(&fixture("golay-dual.code")), "--method", "fast", "--mem-cap", "1024"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_and_malformed_inputs_exit_one() {
    assert_eq!(run(&["wenum", "/nonexistent/code.tern"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.code");
    std::fs::write(&bad, "TERNARY-CODE v1\nn=3 k=1 id=bad\n11\n").unwrap();
    let out = run(&["wenum", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn css_builds_the_golay_code() {
    let text = stdout_of(&["css", path(&fixture("golay-dual.code"))]);
    let code = parse_stabilizer(&text).unwrap();
    assert_eq!((code.n(), code.r(), code.k()), (11, 10, 1));
    code.validate().unwrap();

    let dir = tempfile::tempdir().unwrap();
    let even = dir.path().join("even.code");
    std::fs::write(&even, "TERNARY-CODE v1\nn=6 k=1 id=even\n111000\n").unwrap();
    assert_eq!(run(&["css", path(&even)]).status.code(), Some(1));
}

#[test]
fn shortening_the_golay_state_recovers_the_golay_enumerator() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("short");
    stdout_of(&["shorten", path(&fixture("golay-state-12.stab")), "--coord", "1", "--out-dir", path(&out_dir)]);
    let files: Vec<PathBuf> = std::fs::read_dir(&out_dir).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let a = WeightEnumerator::parse(&stdout_of(&["wenum", path(&files[0])])).unwrap();
    assert_eq!(a.coeffs_u64(), vec![1, 0, 0, 0, 0, 0, 528, 0, 7920, 11000, 23760, 15840]);

    let all = stdout_of(&["shorten", path(&fixture("golay-state-12.stab")), "--all-rotations"]);
    assert_eq!(all.matches("STABILIZER-CODE v1").count(), 12 * 24);
    assert_eq!(run(&["shorten", path(&fixture("golay-state-12.stab")), "--coord", "0"]).status.code(), Some(1));
}

#[test]
fn distill_reports_and_gates_on_distillation() {
    let golay = stdout_of(&["distill", path(&fixture("golay-dual.code")), "--require-distill"]);
    assert!(golay.contains("noise exponent: 3 (leading coefficient 55/18)"), "{golay}");
    assert!(golay.contains("threshold: 0.387"), "{golay}");
    assert!(golay.contains("B(-1/2): -6561/64"), "{golay}");

    let rep3 = run(&["distill", path(&fixture("rep3.code")), "--require-distill"]);
    assert_eq!(rep3.status.code(), Some(2));
    let rep3 = run(&["distill", path(&fixture("rep3.code"))]);
    assert!(rep3.status.success());
    assert!(String::from_utf8_lossy(&rep3.stdout).contains("distills: false"));

    let json = stdout_of(&["distill", path(&fixture("m13.code")), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["b_at_minus_half"]["num"], "0");
    assert_eq!(v["distills"], false);
    assert_eq!(v["classification"], "none");
}

#[test]
fn distill_rejects_non_a_enumerators() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b.wenum");
    std::fs::write(&b, "WENUM v1\nn=3 k=1 kind=B\n0 1\n2 24\n3 56\n").unwrap();
    assert_eq!(run(&["distill", "--enumerator", path(&b)]).status.code(), Some(1));
}

#[test]
fn search_reports_are_deterministic() {
    let dir = fixture_dir(&["rep3.code", "golay-dual.code", "code23.code"]);
    let first = stdout_of(&["search", path(dir.path()), "--no-timing", "--jobs", "1"]);
    let second = stdout_of(&["search", path(dir.path()), "--no-timing", "--jobs", "3"]);
    assert_eq!(first, second);
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 4);
    let golay = lines.iter().find(|l| l.starts_with("golay-dual,")).unwrap();
    assert!(golay.contains(",55,18,"), "{golay}");
    // Canonical order: n ascending.
    assert!(lines[1].starts_with("rep3,") && lines[3].starts_with("code23,"));
}

#[test]
fn search_json_report_round_trips() {
    let dir = fixture_dir(&["rep3.code", "golay-dual.code", "m13.code"]);
    let out = tempfile::tempdir().unwrap();
    let report_path = out.path().join("report.json");
    stdout_of(&["search", path(dir.path()), "--format", "json", "--report", path(&report_path), "--no-timing"]);
    let report = read_report_json(&report_path).unwrap();
    assert_eq!(report.records.len(), 3);
    assert_eq!(report.distinct_enumerators, 3);
    assert_eq!(report.summary.get("order-3"), Some(&1));
    assert_eq!(report.summary.get("none"), Some(&2));
}

#[test]
fn search_reports_bad_files_and_keeps_going() {
    let dir = fixture_dir(&["golay-dual.code"]);
    std::fs::write(dir.path().join("broken.code"), "TERNARY-CODE v1\nn=5 k=2 id=broken\n10000\n").unwrap();
    let out = run(&["search", path(dir.path()), "--no-timing"]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("broken.code:"), "{stderr}");
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 2);

    let empty = tempfile::tempdir().unwrap();
    assert_eq!(run(&["search", path(empty.path())]).status.code(), Some(1));
}

#[test]
fn search_shortens_stabilizer_states() {
    let dir = fixture_dir(&["golay-state-12.stab"]);
    let csv = stdout_of(&["search", path(dir.path()), "--shorten", "--no-timing"]);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().any(|r| r.contains(",55,18,")), "{csv}");
}

#[test]
fn oracle_subcommand_passes() {
    let out = stdout_of(&["oracle", "--n", "2..3", "--trials", "10", "--seed", "3"]);
    assert!(out.contains("10 trials"), "{out}");
    assert!(out.contains("0 failures"), "{out}");
    assert_eq!(run(&["oracle", "--n", "9"]).status.code(), Some(1));
}
