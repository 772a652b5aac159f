use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../core/fixtures/{name}.quiver"))
}

fn tau2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tau2")).args(args).output().unwrap()
}

fn on(name: &str, args: &[&str]) -> Output {
    let spec = fixture(name);
    let mut all = vec![spec.to_str().unwrap()];
    all.extend_from_slice(args);
    tau2(&all)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

const STAR: &str = "1-1-0,0-1-1,0-0-1,1-0-0";

#[test]
fn info_reports_lambda3() {
    let out = on("lambda3_p101", &["info"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["dim"].as_u64(), v["vertices"].as_u64(), v["gldim"].as_u64()), (Some(5), Some(3), Some(2)));
}

#[test]
fn echo_spec_reparses() {
    let out = on("lambda3_p2", &["info", "--echo-spec"]);
    let text = json(&out)["spec"].as_str().unwrap().to_string();
    let original = tau2::algebra::parse_spec(&std::fs::read_to_string(fixture("lambda3_p2")).unwrap()).unwrap();
    assert_eq!(tau2::algebra::parse_spec(&text).unwrap(), original);
}

#[test]
fn exit_codes() {
    let out = on("loop", &["indecs"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error(&out)["error"], "NOT_ADMISSIBLE");
    let out = on("kronecker", &["indecs"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error(&out)["error"], "LIMIT_EXCEEDED");
    let out = on("lambda3_p101", &["torsion", "enum", "--ct", STAR, "--budget", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let out = on("lambda3_p101", &["ctcheck", "--gens", "2-2-2"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(error(&out)["detail"].as_str().unwrap().contains("2-2-2"));
    assert_eq!(tau2(&["/nonexistent.quiver", "info"]).status.code(), Some(4));
    assert_eq!(tau2(&[]).status.code(), Some(4));
    // 8 support tau_2-tilting modules against 7 pairs.
    let out = on("lambda3_p101", &["verify", "theorem1", "--ct", STAR]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!((v["counts"]["tau2"].as_u64(), v["counts"]["pairs"].as_u64()), (Some(8), Some(7)));
    assert_eq!(on("ss3", &["verify", "theorem1", "--ct", "1-0-0,0-1-0,0-0-1"]).status.code(), Some(0));
    assert_eq!(on("zero", &["verify", "theorem1", "--ct", ""]).status.code(), Some(0));
}

#[test]
fn enumerations() {
    let out = on("lambda3_p101", &["ctfind"]);
    let subs = json(&out)["subcategories"].as_array().unwrap().clone();
    assert_eq!(subs.len(), 1);
    assert_eq!(subs[0].as_array().unwrap().len(), 4);
    let ok = on("lambda3_p101", &["ctcheck", "--gens", STAR]);
    assert_eq!(json(&ok)["holds"], true);
    let bad = on("lambda3_p101", &["ctcheck", "--gens", "1-1-0,0-1-1,0-0-1,1-0-0,0-1-0"]);
    assert_eq!(json(&bad)["holds"], false);
    let pairs = json(&on("lambda3_p101", &["torsion", "enum", "--ct", STAR]));
    assert_eq!(pairs["pairs"].as_array().unwrap().len(), 7);
    let t = json(&on("lambda3_p101", &["tau2", "enum", "--ct", STAR]));
    assert_eq!(t["tau2"].as_array().unwrap().len(), 8);
    let empty = json(&on("zero", &["torsion", "enum", "--ct", ""]));
    assert_eq!(empty["pairs"].as_array().unwrap().len(), 1);
}

#[test]
fn indecs_and_ar() {
    let out = on("lambda3_p2", &["indecs", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["modules"].as_array().unwrap().len(), 5);
    assert_eq!(v["oracle"]["agrees"], true);
    let dot = on("lambda3_p101", &["ar", "--dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph AR {"));
}

#[test]
fn decompose_module_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    // P1 + S3 over the linear quiver 1 -> 2 -> 3 with b*a = 0.
    std::fs::write(&path, r#"{"dims": {"1": 1, "2": 1, "3": 1}, "action": {"a": [[1]], "b": [[0]]}}"#).unwrap();
    let out = on("lambda3_p101", &["module", "decompose", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut dims: Vec<Value> = json(&out)["summands"].as_array().unwrap().iter().map(|s| s["dims"].clone()).collect();
    dims.sort_by_key(|d| d.to_string());
    assert_eq!(dims, vec![serde_json::json!([0, 0, 1]), serde_json::json!([1, 1, 0])]);
    std::fs::write(&path, "{").unwrap();
    let out = on("lambda3_p101", &["module", "decompose", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn reports_are_deterministic_and_written_once() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        on("lambda3_p101", &["verify", "theorem1", "--ct", STAR, "--out", p.to_str().unwrap()]);
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
}
