use std::path::PathBuf;
use std::process::Command;

use odelin::corpus::run_corpus;
use odelin::expr::DEFAULT_SEED;
use odelin::report::{run_pipeline, Options};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn odelin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_odelin"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn corpus_meets_expectations() {
    let entries = run_corpus(&corpus_dir(), DEFAULT_SEED, 1000).unwrap();
    assert!(entries.len() >= 8);
    for e in &entries {
        assert!(
            e.passed,
            "{}: exit {} (expected {})",
            e.file, e.exit_code, e.expected_exit
        );
    }
}

#[test]
fn exit_codes() {
    assert_eq!(odelin(&["check", "y'' + 3*y*y' + y^3 = 0"]).0, 0);
    assert_eq!(odelin(&["check", "y'' = y^2"]).0, 1);
    assert_eq!(odelin(&["linearize", "x*y'' - y'^3 - y' = 0"]).0, 2);
    assert_eq!(odelin(&["check", "y'' = y'^4"]).0, 3);
    assert_eq!(odelin(&["check", "y'' = (x"]).0, 3);
    let (code, out) = odelin(&[
        "transform-verify",
        "y'' - 2/(x+y)*y'^2 - 1/(x+y)*y' = 0",
        "--phi",
        "y",
        "--psi",
        "x*(x+2*y)",
    ]);
    assert_eq!(code, 0, "{out}");
    let (code, _) = odelin(&[
        "transform-verify",
        "y'' - 2/(x+y)*y'^2 - 1/(x+y)*y' = 0",
        "--phi",
        "x",
        "--psi",
        "y",
    ]);
    assert_eq!(code, 2);
    let (code, out) = odelin(&[
        "linearize",
        "y'' - 2/(x+y)*y'^2 - 1/(x+y)*y' = 0",
        "--w",
        "-1/(x+y)",
        "--z",
        "0",
    ]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn solve_prints_solution_and_json() {
    let (code, out) = odelin(&["--json", "-", "solve", "y'' + 3*y*y' + y^3 = 0"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("general solution"));
    let start = out.find('{').unwrap();
    let json: serde_json::Value = serde_json::from_str(&out[start..]).unwrap();
    assert_eq!(json["status"]["exit_code"], 0);
}

#[test]
fn corpus_subcommand() {
    let dir = corpus_dir();
    let (code, out) = odelin(&["corpus", dir.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn reports_are_deterministic() {
    let eq = "y'' - 2/(x+y)*y'^2 - 1/(x+y)*y' = 0";
    let opts = Options {
        w: Some("-1/(x+y)".into()),
        z: Some("0".into()),
        ..Options::default()
    };
    let a = run_pipeline(eq, &opts).to_json();
    let b = run_pipeline(eq, &opts).to_json();
    assert_eq!(a, b);
}
