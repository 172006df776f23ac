use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(args)
        .env_remove("RPF_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

#[test]
fn enumerate_d14_on_g4() {
    let out = hecke(&["forms", "enumerate", "--p", "4", "--disc", "14"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    let forms: usize = classes
        .iter()
        .map(|c| c["forms"].as_array().unwrap().len())
        .sum();
    assert_eq!(forms, 4);
    assert_eq!(v["negation"], serde_json::json!([2, 1]));
}

#[test]
fn build_then_verify_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let doc = path(&dir, "q.json");
    let out = hecke(&[
        "rpf",
        "build",
        "--p",
        "4",
        "--k",
        "1",
        "--disc",
        "14",
        "--theorem",
        "1",
        "--class",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&doc, &out.stdout).unwrap();

    let ok = hecke(&["rpf", "verify", "--in", &doc]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    assert_eq!(json(&ok)["rpf"], Value::Bool(true));

    // Change one realized coefficient so the function no longer satisfies the relations.
    let mut v = json(&out);
    let num = v["realized"]["num"].as_array_mut().unwrap();
    num[1] = Value::String("2".into());
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let res = hecke(&["rpf", "verify", "--in", &bad]);
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(json(&res)["rpf"], Value::Bool(false));
}

#[test]
fn verify_expression() {
    let out = hecke(&["rpf", "verify", "--expr", "1/z", "--p", "5", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let out = hecke(&["rpf", "verify", "--expr", "1/(z-1)", "--p", "5", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes_for_usage_and_budget() {
    assert_eq!(hecke(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        hecke(&["group", "--p", "4", "--word", "SX"]).status.code(),
        Some(1)
    );
    assert_eq!(
        hecke(&["forms", "enumerate", "--p", "4", "--disc", "(14"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(hecke(&["--help"]).status.code(), Some(0));
    let out = hecke(&[
        "--budget",
        "cf_steps=1",
        "cfrac",
        "expand",
        "--p",
        "4",
        "--x",
        "(L + sqrt14)/6",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let env = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["cfrac", "expand", "--p", "4", "--x", "(L + sqrt14)/6"])
        .env("RPF_BUDGET", "cf_steps=1")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
}

#[test]
fn manifest_replay_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(&dir, "run.json");
    let out = hecke(&[
        "--manifest",
        &m,
        "rpf",
        "build",
        "--p",
        "4",
        "--k",
        "3",
        "--disc",
        "14",
        "--theorem",
        "3",
        "--class",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(Path::new(&m).exists());
    let replay = hecke(&["replay", &m]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(json(&replay)["reproduced"], Value::Bool(true));

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    doc["output_sha256"] = Value::String("00".repeat(32));
    std::fs::write(&m, serde_json::to_string(&doc).unwrap()).unwrap();
    let replay = hecke(&["replay", &m]);
    assert_eq!(replay.status.code(), Some(1));
    assert_eq!(json(&replay)["reproduced"], Value::Bool(false));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "rpf",
        "build",
        "--p",
        "4",
        "--k",
        "1",
        "--disc",
        "14",
        "--theorem",
        "2",
        "--class",
        "1",
        "--class",
        "2",
    ];
    let a = hecke(&args);
    let b = hecke(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn latex_output() {
    let out = hecke(&[
        "--latex",
        "cfrac",
        "automorph",
        "--p",
        "4",
        "--x",
        "(L + sqrt14)/2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\\begin{pmatrix}"), "{text}");
    assert!(text.contains("\\sqrt{2}"), "{text}");
}

#[test]
fn group_word_and_field() {
    let v = json(&hecke(&["group", "--p", "4", "--word", "UUUU"]));
    assert_eq!(v["element"]["kind"], Value::String("identity".into()));
    let v = json(&hecke(&["field", "--p", "7"]));
    assert_eq!(v["degree"], Value::from(3));
}
