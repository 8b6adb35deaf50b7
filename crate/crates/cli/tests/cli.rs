use std::path::PathBuf;
use std::process::{Command, Output};

use centra::superposition::ExpPolyVec;
use centra_cli::report::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn centra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_centra")).args(args).output().expect("binary runs")
}

fn centra_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_centra")).args(args).env(key, value).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = centra(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Parses into the typed report and checks that re-serializing reproduces the bytes.
fn round_trip<T: Serialize + DeserializeOwned>(stdout: &str) -> T {
    let report: T = serde_json::from_str(stdout).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", stdout);
    report
}

fn path(name: &str) -> String {
    problem(name).to_string_lossy().into_owned()
}

fn write_problem(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn centralizer_dimensions() {
    let r: CentralizerReport = round_trip(&run_ok(&["centralizer", &path("diag12.json"), "--max-degree", "4"]));
    let dims: Vec<usize> = r.degrees.iter().filter(|b| b.degree >= 1).map(|b| b.dimension).collect();
    assert_eq!(dims, vec![2, 1, 0, 0]);
    assert_eq!(r.degrees[2].basis, vec![vec!["0".to_string(), "x1^2".to_string()]]);
    assert!(r.closure.violations.is_empty());

    let r: CentralizerReport = round_trip(&run_ok(&["centralizer", &path("zero2.json"), "--max-degree", "1"]));
    assert_eq!(r.degrees[0].dimension, 2);
    assert_eq!(r.degrees[1].dimension, 4);
    assert!(r.notes.iter().any(|n| n.contains("zero")));

    let r: CentralizerReport = round_trip(&run_ok(&["centralizer", &path("so2.json"), "--max-degree", "3"]));
    let dims: Vec<usize> = r.degrees.iter().map(|b| b.dimension).collect();
    assert_eq!(dims, vec![0, 2, 0, 2]);
}

#[test]
fn invariants_commands() {
    let r: InvariantsReport = round_trip(&run_ok(&["invariants", &path("so2.json"), "--max-degree", "2"]));
    assert_eq!(r.degrees[1].basis, vec!["x1^2 + x2^2".to_string()]);
    let r: InvariantsReport = round_trip(&run_ok(&["invariants", &path("diag12.json"), "--max-degree", "5"]));
    assert!(r.degrees.iter().all(|b| b.dimension == 0));
    let res = r.resonance.unwrap();
    assert!(res.solutions.is_empty() && res.simple);
    let r: InvariantsReport =
        round_trip(&run_ok(&["invariants", &path("sl2.json"), "--max-degree", "3", "--alpha", "1,0,-2"]));
    assert!(r.degrees.iter().all(|b| b.dimension == 0));
    assert!(r.notes.iter().any(|n| n.contains("derived algebra")));
    let out = centra(&["invariants", &path("sl2.json"), "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn finiteness_verdicts() {
    let r: FinitenessReport = round_trip(&run_ok(&["finiteness", &path("example_pair.json")]));
    assert_eq!(r.verdict, "FiniteCertified");
    match r.certificate.unwrap() {
        Certificate::SameSignCombination { spectrum, max_degree, nilpotency, .. } => {
            assert!(spectrum.iter().all(|s| !s.starts_with('-')) || spectrum.iter().all(|s| s.starts_with('-')));
            assert_eq!(max_degree, 4);
            assert!(nilpotency.unwrap().violations.is_empty());
        }
        other => panic!("unexpected certificate {other:?}"),
    }
    let r: FinitenessReport = round_trip(&run_ok(&["finiteness", &path("so2.json")]));
    assert_eq!(r.verdict, "InfiniteCertified");
    assert!(matches!(r.certificate, Some(Certificate::Invariant { passed: true, .. })));
    let r: FinitenessReport = round_trip(&run_ok(&["finiteness", &path("undetermined.json")]));
    assert_eq!(r.verdict, "Undetermined");
    assert_eq!(r.searched_bound, Some(6));
    let r: FinitenessReport =
        round_trip(&run_ok(&["finiteness", &path("undetermined.json"), "--max-degree", "10"]));
    assert_eq!(r.verdict, "InfiniteCertified");
}

#[test]
fn solve_via_chen_reduction() {
    let r: SolveReport = round_trip(&run_ok(&["solve", &path("chen_diag12.json"), "--verify", "1", "1000"]));
    assert_eq!(r.method, "chen");
    assert!(r.residual_is_zero);
    let v = r.verification.unwrap();
    assert!(v.passed && v.max_abs_error <= 1e-8);
    let x = ExpPolyVec::from_records(2, &r.solution).unwrap();
    assert_eq!(x.components[0].to_string(), "e^(t)");
    assert_eq!(x.components[1].to_string(), "1/2*e^(2*t) + t*e^(2*t)");
}

#[test]
fn solve_elementary_system_with_flags() {
    let r: SolveReport = round_trip(&run_ok(&[
        "solve",
        &path("elementary.json"),
        "--y0",
        "-1,2,1/2",
        "--verify",
        "1",
        "1000",
    ]));
    assert_eq!(r.method, "family");
    assert_eq!(r.y0, vec!["-1", "2", "1/2"]);
    assert_eq!(r.family.len(), 2);
    assert!(r.residual_is_zero && r.verification.unwrap().passed);
}

#[test]
fn normal_form_of_example_pair() {
    let r: NormalFormCommandReport =
        round_trip(&run_ok(&["normal-form", &path("example_pair.json"), "--symmetry"]));
    assert_eq!(r.report.normal_form, vec!["-x1", "-x2 + 5/2*x1*x3", "0"]);
    assert!(r.symmetry_used);
    assert_eq!(r.report.degrees[0].resonant_basis, vec![vec!["0", "x1*x3", "0"]]);
}

#[test]
fn verify_runs_all_checks() {
    let r: VerifyReport = round_trip(&run_ok(&["verify", &path("chen_diag12.json")]));
    assert!(r.passed);
    let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    for expected in ["jacobi_identity", "directional_closure", "finiteness_certificate", "exact_residual", "numeric_rk4"] {
        assert!(names.contains(&expected), "{expected} missing from {names:?}");
    }
    let out = centra(&["verify", &path("chen_diag12.json"), "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic_across_runs_and_thread_counts() {
    for args in [
        vec!["centralizer", "example_pair.json"],
        vec!["finiteness", "undetermined.json"],
        vec!["solve", "elementary.json", "--verify", "1", "200"],
        vec!["normal-form", "example_pair.json", "--symmetry"],
    ] {
        let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        full[1] = path(args[1]);
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let a = centra_env(&refs, "CENTRA_THREADS", "1");
        let b = centra_env(&refs, "CENTRA_THREADS", "4");
        let c = centra(&refs);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, c.stdout);
    }
}

#[test]
fn exit_codes_and_error_stream() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = write_problem(&dir, "bad.json", "{ not json");
    let out = centra(&["centralizer", &bad_json]);
    assert_eq!(out.status.code(), Some(2));
    let err: ErrorReport = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err.error.kind, "parse");
    assert!(out.stdout.is_empty());

    let decimal = write_problem(&dir, "dec.json", r#"{"dimension": 1, "generators": [[["0.5"]]]}"#);
    assert_eq!(centra(&["centralizer", &decimal]).status.code(), Some(2));
    assert_eq!(centra(&["centralizer", "/nonexistent/problem.json"]).status.code(), Some(2));

    let out = centra(&["centralizer", &path("sl2.json"), "--cap", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let err: ErrorReport = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err.error.exit_code, 3);

    let infinite = write_problem(
        &dir,
        "inf.json",
        r#"{"dimension": 2, "generators": [], "field": ["x1 + x1^2", "3*x2"], "options": {"y0": ["1", "1"]}}"#,
    );
    assert_eq!(centra(&["solve", &infinite, "--cap", "10", "--max-degree", "40"]).status.code(), Some(3));

    let rotation = write_problem(
        &dir,
        "rot.json",
        r#"{"dimension": 2, "generators": [], "field": ["-x2", "x1"], "options": {"y0": ["1", "0"]}}"#,
    );
    let out = centra(&["solve", &rotation]);
    assert_eq!(out.status.code(), Some(4));
    let err: ErrorReport = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err.error.kind, "irrational_spectrum");

    assert_eq!(centra(&["solve", &path("chen_diag12.json"), "--verify", "1", "100", "--tol", "0"]).status.code(), Some(1));
    assert_eq!(centra_env(&["centralizer", &path("so2.json")], "CENTRA_THREADS", "zero").status.code(), Some(2));
    assert_eq!(centra(&["normal-form", &path("diag12.json")]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = centra(&["finiteness", &path("so2.json"), "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    assert_eq!(written, run_ok(&["finiteness", &path("so2.json")]));
}

#[test]
fn text_format_is_readable() {
    let text = run_ok(&["solve", &path("chen_diag12.json"), "--verify", "1", "1000", "--format", "text"]);
    assert!(text.contains("x1(t) = e^(t)"));
    assert!(text.contains("exact residual zero: true"));
}
