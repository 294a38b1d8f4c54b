//! End-to-end checks of the binary: exit-code contract, file parsing,
//! and the certificate round trip through the JSON output.

use std::fs;
use std::process::{Command, Output};

fn frobcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn gen_then_solve_tight_instance_exits_negative() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tight5.sys");
    let gen = frobcert(&[
        "gen",
        "--tight-p",
        "5",
        "--tight-n",
        "1",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let solve = frobcert(&["solve", path.to_str().unwrap()]);
    assert_eq!(solve.status.code(), Some(2), "tight instance is a certified negative");
    let text = stdout(&solve);
    assert!(text.contains("3/2"), "message must cite the available slack: {text}");
    assert!(text.contains("9/2"), "message must cite the required slack: {text}");
}

#[test]
fn solve_unimodular_instance_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("uni.sys");
    fs::write(
        &path,
        "canonical\n3 2\n1 0\n0 1\n-1 -1\n6 6 2\n",
    )
    .unwrap();
    let solve = frobcert(&["solve", path.to_str().unwrap()]);
    assert_eq!(solve.status.code(), Some(0));
    assert!(stdout(&solve).contains("verified: true"));
}

#[test]
fn solve_json_roundtrip_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("uni.sys");
    let contents = "canonical\n3 2\n1 0\n0 1\n-1 -1\n6 6 2\n";
    fs::write(&path, contents).unwrap();
    let solve = frobcert(&["solve", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(solve.status.code(), Some(0));
    let record = frobcert::report::from_json(&stdout(&solve)).unwrap();
    assert!(record.verified);
    let frobcert::textio::SystemFile::Canonical(sys) =
        frobcert::textio::parse_system(contents).unwrap()
    else {
        panic!("canonical file expected");
    };
    assert_eq!(frobcert::report::reverify_canonical(&record, &sys), Some(true));
}

#[test]
fn solve_standard_semigroup() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("std.sys");
    fs::write(&path, "standard\n1 2\n2 3\n40\n").unwrap();
    let solve = frobcert(&["solve", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(solve.status.code(), Some(0));
    let record = frobcert::report::from_json(&stdout(&solve)).unwrap();
    assert_eq!(record.kind, "standard");
    assert!(record.verified);
}

#[test]
fn malformed_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.mat");
    fs::write(&path, "2 2\n1 0\n0 x\n").unwrap();
    let forms = frobcert(&["forms", path.to_str().unwrap(), "--hnf"]);
    assert_eq!(forms.status.code(), Some(1));
    assert!(stderr(&forms).contains("line 3"));
}

#[test]
fn forms_snf_diag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d23.mat");
    fs::write(&path, "2 2\n2 0\n0 3\n").unwrap();
    let forms = frobcert(&["forms", path.to_str().unwrap(), "--snf"]);
    assert_eq!(forms.status.code(), Some(0));
    let text = stdout(&forms);
    assert!(text.contains("1 0"));
    assert!(text.contains("0 6"));
    assert!(text.contains("reconstruction P*A*Q == S: ok"));
}

#[test]
fn forms_hnf_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.mat");
    fs::write(&path, "2 2\n1 0\n0 1\n").unwrap();
    let forms = frobcert(&["forms", path.to_str().unwrap(), "--hnf"]);
    assert_eq!(forms.status.code(), Some(0));
    assert!(stdout(&forms).contains("reconstruction (H|0)*Q == A: ok"));
}

#[test]
fn oracle_gen_tight_threshold() {
    let oracle = frobcert(&["oracle", "--gen-tight-p", "4", "--box-radius", "0"]);
    assert_eq!(oracle.status.code(), Some(0));
    let text = stdout(&oracle);
    assert!(text.starts_with("b,max_slack,feasible,witness"));
    assert!(text.contains("# empirical_threshold = 2"));
}

#[test]
fn oracle_unbounded_polytope_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unbounded.sys");
    fs::write(&path, "canonical\n2 2\n1 0\n0 1\n0 0\n").unwrap();
    let oracle = frobcert(&["oracle", path.to_str().unwrap()]);
    assert_eq!(oracle.status.code(), Some(1));
    assert!(stderr(&oracle).contains("unbounded"));
}

#[test]
fn solve_exp_sweep_budget_exceeded() {
    // codimension 25 exceeds the default 2^k sweep cap of 20
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deep.sys");
    let mut text = String::from("canonical\n26 1\n");
    text.push_str("1\n");
    for i in 0..25 {
        text.push_str(&format!("{}\n", i + 2));
    }
    text.push_str(&vec!["9"; 26].join(" "));
    text.push('\n');
    fs::write(&path, text).unwrap();
    let solve = frobcert(&["solve", path.to_str().unwrap(), "--mode", "exp-sweep"]);
    assert_eq!(solve.status.code(), Some(1));
    assert!(stderr(&solve).contains("budget"));
}

#[test]
fn bound_reports_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("uni.sys");
    fs::write(&path, "canonical\n3 2\n1 0\n0 1\n-1 -1\n6 6 2\n").unwrap();
    let bound = frobcert(&["bound", path.to_str().unwrap()]);
    assert_eq!(bound.status.code(), Some(0));
    let text = stdout(&bound);
    assert!(text.contains("delta = 1"));
    assert!(text.contains("numeric envelope"));
    assert!(text.contains("bound form"));
}

#[test]
fn seed_flag_reproducible_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("uni.sys");
    fs::write(&path, "canonical\n3 2\n1 0\n0 1\n-1 -1\n6 6 2\n").unwrap();
    let a = frobcert(&["solve", path.to_str().unwrap(), "--seed", "7", "--format", "json"]);
    let b = frobcert(&["solve", path.to_str().unwrap(), "--seed", "7", "--format", "json"]);
    assert_eq!(stdout(&a), stdout(&b));
}
