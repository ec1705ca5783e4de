use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn tbk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tbk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = tbk(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.display().to_string()
}

fn emit_example(dir: &Path) -> String {
    let d = dir.display().to_string();
    report(&["example", "bogomolov", "--p", "2", "--emit-dir", &d]);
    d
}

#[test]
fn emitted_example_round_trips_through_commands() {
    let tmp = tempfile::tempdir().unwrap();
    let d = emit_example(tmp.path());
    let model = format!("{d}/model.json");
    let e12 = format!("{d}/e1e2.json");
    let e13 = format!("{d}/e1e3.json");

    let r = report(&["b0", "test", "--cocycle", &e12]);
    assert_eq!(r["result"]["member"], json!(true));
    let r = report(&["cocycle", "coboundary", "--cocycle", &e12]);
    assert_eq!(r["result"]["coboundary"], json!(false));

    let r = report(&[
        "bg",
        "test",
        "--cocycle",
        &e13,
        "--model",
        &model,
        "--method",
        "both",
    ]);
    assert_eq!(r["result"]["member"], json!(false));

    let files: Vec<String> = ["e1e2", "e1e3", "e1e4", "e2e3", "e2e4", "e3e4"]
        .iter()
        .map(|n| format!("{d}/{n}.json"))
        .collect();
    let mut args = vec!["span", "analyze", "--cocycles"];
    args.extend(files.iter().map(String::as_str));
    let r = report(&args);
    assert_eq!(r["result"]["invariant_factors"], json!([2]));
    assert_eq!(r["inputs"].as_object().unwrap().len(), 6);

    let r = report(&[
        "orbifold",
        "verify-cor53",
        "--cocycle",
        &e12,
        "--model",
        &model,
    ]);
    assert_eq!(r["result"]["termwise_equal"], json!(true));
}

#[test]
fn reports_are_deterministic_and_record_input_digests() {
    let tmp = tempfile::tempdir().unwrap();
    let d = emit_example(tmp.path());
    let e12 = format!("{d}/e1e2.json");
    let first = tbk(&["cocycle", "check", "--cocycle", &e12]);
    let second = tbk(&["cocycle", "check", "--cocycle", &e12]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let r: Value = serde_json::from_slice(&first.stdout).unwrap();
    let digest = tbk::io::sha256_hex(&std::fs::read(&e12).unwrap());
    assert_eq!(r["inputs"][&e12], json!(digest));
}

#[test]
fn schur_multiplier_of_inline_group() {
    let tmp = tempfile::tempdir().unwrap();
    let g = write(tmp.path(), "g.json", &json!({"abelian": [2, 4]}));
    let r = report(&["h2", "--group", &g]);
    assert_eq!(r["result"]["invariant_factors"], json!([2]));
    let q = write(tmp.path(), "q.json", &json!({"named": "quaternion"}));
    let r = report(&["h2", "--group", &q]);
    assert_eq!(r["result"]["invariant_factors"], json!([]));
}

#[test]
fn errors_map_to_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write(
        tmp.path(),
        "bad.json",
        &json!({"modulus": 2, "group": {"abelian": [2]}, "table": [[0, 0]]}),
    );
    let out = tbk(&["cocycle", "check", "--cocycle", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"].as_str().unwrap().contains("/table"));

    // a normalized table that fails the cocycle identity on Z_2 x Z_2
    let table = json!([[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]);
    let g = json!({"abelian": [2, 2]});
    let broken = write(
        tmp.path(),
        "broken.json",
        &json!({"modulus": 2, "group": g, "table": table}),
    );
    let r = report(&["cocycle", "check", "--cocycle", &broken]);
    assert_eq!(r["result"]["cocycle"], json!(false));
    let out = tbk(&["b0", "test", "--cocycle", &broken]);
    assert_eq!(out.status.code(), Some(3));

    let big = tmp.path().join("big").display().to_string();
    let out = tbk(&["example", "bogomolov", "--p", "5", "--emit-dir", &big]);
    assert_eq!(out.status.code(), Some(4));
}
