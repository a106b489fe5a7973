use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_banglab")).args(args).env_remove("BANGLAB_SEED").output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let out = run(&a);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn reduce_trace_ends_in_the_surface_normal_form() {
    let v = json(&["reduce", "(\\x.!der !x) !y", "--strategy", "surface", "--fuel", "10"]);
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 2);
    assert_eq!(trace[0]["rule"], "dB");
    assert_eq!(v["normal_form"], "!der !y");
    let v = json(&["reduce", "!der !y", "--strategy", "full"]);
    assert_eq!(v["normal_form"], "!y");
}

#[test]
fn meaningfulness_verdicts() {
    assert_eq!(json(&["meaningful", "x x"])["verdict"], "unknown");
    assert_eq!(json(&["meaningful", "x x", "--refute"])["verdict"], "meaningless");
    let v = json(&["meaningful", "\\z.z"]);
    assert_eq!(v["verdict"], "meaningful");
    assert_eq!(v["context"], "[] !!(\\z.z)");
    assert_eq!(json(&["meaningful", "x (\\y.z)", "--from", "cbv"])["verdict"], "meaningful");
}

#[test]
fn embeddings_and_inhabitation() {
    let v = json(&["embed", "--from", "cbn", "(\\x. y x x)((\\z.z) (\\z.z))"]);
    assert_eq!(v["term"], "(\\x.y !x !x) !((\\z.z) !(\\z.z))");
    let v = json(&["inhabit", "[a]->[a]"]);
    assert_eq!(v["result"], "inhabited");
    assert_eq!(v["witness"], "\\x.!x");
    assert_eq!(json(&["inhabit", "[[a]->b, [a]]"])["result"], "not_inhabited");
}

#[test]
fn derivations_round_trip_through_the_checker() {
    let ds = json(&["typings", "x x"]);
    let d = &ds.as_array().unwrap()[0];
    let mut child = Command::new(env!("CARGO_BIN_EXE_banglab"))
        .args(["check-derivation", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(d.to_string().as_bytes()).unwrap();
    assert!(child.wait_with_output().unwrap().status.success());

    let mut bad = d.clone();
    bad["type"] = Value::String("[]".into());
    let mut child = Command::new(env!("CARGO_BIN_EXE_banglab"))
        .args(["check-derivation", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(bad.to_string().as_bytes()).unwrap();
    assert_eq!(child.wait_with_output().unwrap().status.code(), Some(1));
}

#[test]
fn prop_test_reports_are_deterministic() {
    let args = ["--json", "prop-test", "--suite", "measure", "--seed", "1", "--count", "500", "--all"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["counts"]["fail"], 0);
    assert_eq!(v["counts"]["pass"], 500);
    assert!(v["statement"].as_str().unwrap().contains("measure"));
}

#[test]
fn seed_comes_from_the_environment() {
    let args = ["--json", "prop-test", "--suite", "confluence", "--count", "20", "--all"];
    let with = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_banglab")).args(args).env("BANGLAB_SEED", seed).output().unwrap().stdout
    };
    let v: Value = serde_json::from_slice(&with("42")).unwrap();
    assert_eq!(v["config"]["seed"], 42);
    assert_ne!(with("42"), with("43"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["corpus"]).status.code(), Some(0));
    assert_eq!(run(&["parse", "(\\x."]).status.code(), Some(2));
    assert_eq!(run(&["embed", "--from", "cbn", "!x"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["inhabit", "[a"]).status.code(), Some(2));
}
