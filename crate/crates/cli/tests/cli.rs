//! End-to-end tests of the binary: exit statuses, report formats, file
//! outputs, and determinism.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_parity-chsh"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should run")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process should exit normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("stdout should be valid JSON")
}

#[test]
fn bound_white_noise_reports_the_known_values() {
    let out = run(&["bound", "--family", "white-noise", "--p", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("bound: 1.41421356237"), "got:\n{text}");
    assert!(text.contains("lambda1: 1\n"));
    assert!(text.contains("lambda2: 1\n"));
    assert!(text.contains("see_saw: 1.4142135"));
    assert!(text.starts_with("config: subcommand=bound family=white-noise p=1 "));

    let out = run(&["bound", "--family", "white-noise", "--p", "0"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("bound: 0\n"));
}

#[test]
fn bound_json_report_parses() {
    let out = run(&["bound", "--family", "white-noise", "--p", "1", "--json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["config"]["subcommand"], "bound");
    assert_eq!(v["config"]["p"], 1.0);
    assert!(v["config"]["state"].is_null());
    let bound = v["bound"].as_f64().unwrap();
    assert!((bound - std::f64::consts::SQRT_2).abs() < 1e-9);
    for key in ["a", "a_prime", "b", "b_prime", "c"] {
        assert_eq!(v["frame"][key].as_array().unwrap().len(), 3);
    }
    assert!(v["see_saw"].as_f64().unwrap() > std::f64::consts::SQRT_2 - 1e-5);
}

#[test]
fn bound_requires_exactly_one_source() {
    let out = run(&["bound"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--family or --state"));

    let out = run(&[
        "bound",
        "--family",
        "white-noise",
        "--p",
        "1",
        "--state",
        "x.json",
    ]);
    assert_eq!(code(&out), 1);

    let out = run(&["bound", "--family", "white-noise"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("requires --p"));
}

#[test]
fn bound_reports_missing_file_as_io_error() {
    let out = run(&["bound", "--state", "/definitely/not/here.json"]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
}

#[test]
fn bound_rejects_bad_state_files() {
    let dir = tempfile::tempdir().unwrap();
    let corrupt = dir.path().join("corrupt.json");
    std::fs::write(&corrupt, "this is not json").unwrap();
    let out = run(&["bound", "--state", corrupt.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));

    let bad_trace = dir.path().join("trace2.json");
    std::fs::write(
        &bad_trace,
        r#"{"num_qubits": 1, "re": [[2.0, 0.0], [0.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}"#,
    )
    .unwrap();
    let out = run(&["bound", "--state", bad_trace.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("validation failed"));
}

#[test]
fn generated_ghz_marginal_hits_the_quantum_maximum() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ghz_abc.json");
    let out = run(&[
        "state",
        "--family",
        "ghz-abc",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(path.exists());

    let out = run(&["bound", "--state", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("bound: 1.41421356237"));
}

#[test]
fn scan_writes_frozen_csv_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = run(&[
        "scan",
        "--p-min",
        "0",
        "--p-max",
        "1",
        "--steps",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let csv = std::fs::read_to_string(&path).unwrap();
    let expected = "\
p,bell_bound,lower_max_prob,npa_upper_max_prob,min_entropy_bits
0,0,0.125,,3
0.25,0.353553390593,0.200444173824,,2.31872761063
0.5,0.707106781187,0.275888347648,,1.85784357022
0.75,1.06066017178,0.351332521472,,1.50909096753
1,1.41421356237,0.426776695297,,1.22844669684
";
    assert_eq!(csv, expected);

    let meta_text = std::fs::read_to_string(dir.path().join("scan.csv.meta.json")).unwrap();
    let meta: serde_json::Value = serde_json::from_str(&meta_text).unwrap();
    assert_eq!(meta["subcommand"], "scan");
    assert_eq!(meta["steps"], 5);
    assert_eq!(meta["rows"], 5);
    assert_eq!(meta["npa"], false);
}

#[test]
fn scan_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    for path in [&first, &second] {
        let out = run(&["scan", "--steps", "21", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    }
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 22);
    assert!(text.contains("\n1,1.41421356237,0.426776695297,,"));
}

#[test]
fn scan_usage_errors_exit_one() {
    let out = run(&["scan", "--steps", "1", "--out", "/tmp/unused.csv"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--steps"));

    let out = run(&[
        "scan",
        "--p-min",
        "0.5",
        "--p-max",
        "0.5",
        "--out",
        "/tmp/unused.csv",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("empty"));

    let out = run(&["scan", "--p-max", "1.5", "--out", "/tmp/unused.csv"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn scan_unwritable_path_is_io_error() {
    let out = run(&[
        "scan",
        "--steps",
        "2",
        "--out",
        "/no-such-dir-anywhere/out.csv",
    ]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
}

#[test]
fn lhv_lists_all_sixteen_maximizers() {
    let out = run(&["lhv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("classical_max: 1\n"));
    assert!(text.contains("maximizer_count: 16\n"));
    let strategy_lines = text.lines().filter(|l| l.starts_with("  ")).count();
    assert_eq!(strategy_lines, 16);

    let out = run(&["lhv", "--json"]);
    let v = json(&out);
    assert_eq!(v["classical_max"], 1.0);
    assert_eq!(v["classical_min"], -1.0);
    assert_eq!(v["maximizers"].as_array().unwrap().len(), 16);
}

#[test]
fn npa_below_classical_is_exact() {
    let out = run(&["npa", "--bell", "0.9", "--json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["upper"], 1.0);
    assert_eq!(v["best_feasible"], 1.0);
    assert_eq!(v["uncertainty"], 0.0);
    assert_eq!(v["moment_classes"], 50);
    assert!(v["warning"].is_null());

    let out = run(&["npa", "--bell", "1.5"]);
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));
}

#[test]
fn npa_validates_flags() {
    let out = run(&["npa", "--bell", "0.9", "--tol", "0"]);
    assert_eq!(code(&out), 1);
    let out = run(&["npa", "--bell", "0.9", "--max-iters", "0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn monogamy_sampling_reports_no_violations() {
    let out = run(&["monogamy", "--samples", "2000", "--seed", "7", "--json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["samples"], 2000);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["exclusivity_failures"], 0);
    let max = v["max_sum_sq"].as_f64().unwrap();
    assert!(max > 1.0 && max <= 4.0 + 1e-9);
    assert_eq!(v["max_values"].as_array().unwrap().len(), 4);
}

#[test]
fn monogamy_probe_reaches_the_boundary() {
    let out = run(&[
        "monogamy",
        "probe",
        "--theta",
        "0.785398",
        "--phi",
        "0.3",
        "--restarts",
        "2",
        "--seed",
        "3",
        "--json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    let sum_sq = v["sum_sq"].as_f64().unwrap();
    assert!((3.99..=4.0 + 1e-9).contains(&sum_sq), "sum_sq {sum_sq}");
    assert_eq!(v["exclusivity"], true);
}

#[test]
fn help_version_and_usage_exit_codes() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["monogamy", "probe", "--phi", "0"])), 1);
}

#[test]
fn thread_override_notes_sequential_execution() {
    let out = bin()
        .args(["lhv"])
        .env("PARITY_CHSH_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code().unwrap(), 0);
    assert!(stderr(&out).contains("sequentially"));

    let out = bin()
        .args(["lhv"])
        .env("PARITY_CHSH_THREADS", "1")
        .output()
        .unwrap();
    assert!(stderr(&out).is_empty());
}
