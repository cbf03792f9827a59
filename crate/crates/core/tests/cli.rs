//! End-to-end tests of the command-line binary: exit codes, output
//! formats, and round trips through files on disk.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torus-orbits"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("torus-orbits-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("temp file writable");
    path
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["certify", "--help"]).status.code(), Some(0));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["certify"]).status.code(), Some(2)); // no source at all
    assert_eq!(run(&["certify", "--example", "no-such-example"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "/definitely/not/a/file.json"]).status.code(), Some(2));
}

#[test]
fn empty_and_malformed_files_exit_two() {
    let empty = temp_file("empty.json", "");
    assert_eq!(run(&["certify", empty.to_str().unwrap()]).status.code(), Some(2));
    let garbage = temp_file("garbage.json", "{\"n\": 1}");
    assert_eq!(run(&["normal-form", garbage.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn examples_output_round_trips() {
    let out = run(&["examples", "ex-3.1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let path = temp_file("ex31.json", &text);
    // feeding the emitted matrix back in reproduces the same certificate
    let from_file = run(&["certify", path.to_str().unwrap()]);
    let from_builtin = run(&["certify", "--example", "ex-3.1"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&from_builtin));
}

#[test]
fn certify_verdicts() {
    let out = run(&["certify", "--example", "ex-3.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dense"], false);
    assert_eq!(v["rank_z"], 1);
    assert_eq!(v["closure_dim"], 1);

    let out = run(&["certify", "--example", "ex-3.2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dense"], true);
    assert_eq!(v["rank_z"], 2);

    // the global flag is accepted everywhere and changes nothing
    let holed = run(&["--holed", "certify", "--example", "ex-3.2"]);
    assert_eq!(stdout(&holed), stdout(&out));
}

#[test]
fn normal_form_output() {
    let out = run(&["normal-form", "--example", "ex-3.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["k"], 1);
    assert_eq!(v["h"].as_array().unwrap().len(), 2);
    assert!(v["theta_o"].is_object());
    assert!(v["q_block"].is_array());
}

#[test]
fn curve_search_finds_nothing_for_app_a_example() {
    let out = run(&["curve", "--example", "app-A-2d", "--bound", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["found"], false);
}

#[test]
fn orbit_prints_monotone_dispersion_csv() {
    let out = run(&[
        "orbit",
        "--example",
        "ex-3.2",
        "--budget",
        "300",
        "--grid",
        "0.2",
        "--probe",
        "6",
        "--checkpoints",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# budget=300"));
    assert_eq!(lines.next().unwrap(), "points,dispersion,budget_used");
    let mut prev = f64::INFINITY;
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        let d: f64 = fields[1].parse().unwrap();
        assert!(d <= prev, "dispersion must not increase as the sample grows");
        prev = d;
        rows += 1;
    }
    assert!(rows >= 1 && rows <= 5);
}

#[test]
fn approx_of_identical_matrices_is_exact() {
    let base = r#"{"n":1,"g":1,"entries":[[1.0,1.4142135623730951]]}"#;
    let path = temp_file("base.json", base);
    let p = path.to_str().unwrap();
    let out = run(&[
        "approx",
        "--base",
        p,
        "--target",
        p,
        "--epsilon",
        "0.01",
        "--assert-hypothesis",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["found"], true);
    assert_eq!(v["achieved_error"].as_f64().unwrap(), 0.0);
    assert_eq!(v["hypothesis_warning"], false);
}

#[test]
fn approx_without_hypothesis_warns_on_stderr() {
    let base = r#"{"n":1,"g":1,"entries":[[1.0,2.0]]}"#;
    let path = temp_file("warn.json", base);
    let p = path.to_str().unwrap();
    let out = run(&["approx", "--base", p, "--target", p, "--epsilon", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("hypothesis"), "expected a warning, got: {err}");
}
