use std::path::PathBuf;

use kuga_satake::cli::run_with;
use kuga_satake::kspipeline::KSReport;
use serde_json::{json, Value};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("kuga-satake").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_input(name: &str, doc: &Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kuga-satake-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(doc).unwrap()).unwrap();
    path
}

#[test]
fn hilbert_and_classify() {
    assert_eq!(run(&["hilbert", "-a", "1", "-b", "5", "-p", "7"]).1.trim(), "+1");
    assert_eq!(run(&["hilbert", "-a", "-1", "-b", "-1", "-p", "inf"]).1.trim(), "-1");
    let (code, _, err) = run(&["hilbert", "-a", "2", "-b", "3", "-p", "9"]);
    assert_eq!(code, 2);
    assert!(err.contains("not a place"));
    let (code, out, _) = run(&["classify", "-a", "-1", "-b", "-1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ramification"], json!(["2", "inf"]));
    assert_eq!(v["definite"], json!(true));
}

#[test]
fn orbits_command() {
    let (_, out, _) = run(&["orbits", "--degree", "2", "--full"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let sizes: Vec<u64> = v["orbits"].as_array().unwrap().iter().map(|o| o["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![1, 1]);
    let (_, out, _) = run(&["orbits", "--degree", "3", "--cycle", "--format", "text"]);
    assert!(out.contains("orbit sizes: [1, 3]"));
}

#[test]
fn report_json_round_trips() {
    let (code, out, _) = run(&["six-lines", "--d", "5", "--c", "1", "--e", "2"]);
    assert_eq!(code, 0);
    let parsed = KSReport::from_json_str(&out).unwrap();
    assert_eq!(parsed.to_json_string(), out.trim_end());
}

#[test]
fn report_from_file() {
    let doc = json!({
        "field": {"quadratic_d": 2},
        "form": {"dim": 3, "entries": [
            [["0", "1"], "0", "0"],
            ["0", ["0", "1"], "0"],
            ["0", "0", ["-2", "1"]]
        ]}
    });
    let path = write_input("family.json", &doc);
    let (code, out, _) = run(&["report", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cores"], json!("(-1,-1)/Q"));

    let identity = json!({
        "field": {"quadratic_d": 2},
        "form": {"dim": 3, "entries": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}
    });
    let path = write_input("identity.json", &identity);
    let (code, out, _) = run(&["report", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["validation"]["passed"], json!(false));
    assert_eq!(v["cores_invariant_route"], Value::Null);
}

#[test]
fn malformed_input_names_the_key() {
    let doc = json!({
        "field": {"min_poly": ["-2", "0", "1"], "automorphisms": [["0", "1"], ["0", "-1"]]},
        "form": {"dim": 1, "entries": [["1"]]}
    });
    let path = write_input("bad.json", &doc);
    let (code, _, err) = run(&["report", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("field.embeddings"), "{err}");

    let doc = json!({"field": {"quadratic_d": 2}, "form": {"dim": 2, "entries": [["1", "x"], ["0", "1"]]}});
    let path = write_input("bad_entry.json", &doc);
    let (code, _, err) = run(&["report", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("form.entries[0][1]"), "{err}");
}

#[test]
fn six_lines_errors_and_sweep() {
    let (code, _, err) = run(&["six-lines", "--d", "2", "--c", "1", "--e", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("parameter constraint"));
    let (code, out, _) = run(&["six-lines", "--sweep", "13", "--format", "text"]);
    assert_eq!(code, 0);
    // (2,1,1), (5,1,2), (5,2,1), (10,1,3), (10,3,1), (13,2,3), (13,3,2)
    assert_eq!(out.lines().count(), 7);
    assert!(out.lines().all(|l| l.contains("(-1,-1)/Q")));
}

#[test]
fn selftest_passes() {
    let (code, out, _) = run(&["selftest", "--format", "text"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("PASS").count(), 3);
}
