use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerodiv"))
        .current_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let doc = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().unwrap(), doc)
}

#[test]
fn documents_carry_the_schema_and_status() {
    let (code, doc) = json(&["algebra", "info", "ring8_f5.alg"]);
    assert_eq!(code, 0);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["command"], "algebra info");
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["payload"]["hilbert"], serde_json::json!([1, 4, 3]));
    assert_eq!(doc["payload"]["gorenstein"], false);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["--json", "--seed", "7", "generic", "sample", "--e", "3", "--field", "GF(101)", "--trials", "20"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let single = run(&[&["--threads", "1"][..], &args].concat());
    assert_eq!(a.stdout, single.stdout);
}

#[test]
fn errors_exit_with_one() {
    let (code, doc) = json(&["ezd", "check", "ring8_f5.alg", "--elem", "1 + s"]);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "error");
    let (code, doc) = json(&["algebra", "info", "missing.alg"]);
    assert_eq!((code, doc["payload"]["error"].as_str()), (1, Some("io")));
    let (code, _) = json(&["ezd", "check", "ring8_f5.alg", "--elem", "s +* t"]);
    assert_eq!(code, 1);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--threads", "0", "algebra", "info", "ring8_f5.alg"]).status.code(), Some(2));
    let (code, doc) = json(&["family", "build", "ex72_e3_f5.alg", "--w", "x1", "--x", "x1", "--y", "x2", "--z", "x3", "--n", "3..1x"]);
    assert_eq!((code, doc["payload"]["error"].as_str()), (2, Some("usage")));
}

#[test]
fn text_mode_writes_errors_to_stderr() {
    let out = run(&["algebra", "info", "missing.alg"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}
