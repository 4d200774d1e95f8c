use std::path::{Path, PathBuf};
use std::process::Command;

use multbound::scenario::{catalog, Scenario};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multbound"))
}

fn catalog_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog")
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = bin().args(args).output().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn catalog_files_match_presets() {
    for s in catalog() {
        let file = catalog_dir().join(format!("{}.json", s.name));
        assert_eq!(Scenario::load(&file).unwrap(), s, "{}", file.display());
    }
}

#[test]
fn bound_gl2_flag() {
    let f = catalog_dir().join("gl2_flag.json");
    let (code, r, _) = run(&["bound", "--scenario", f.to_str().unwrap(), "--q", "3", "--max-ext", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["mult"]["mu_max"], 1);
    assert_eq!(r["estimator"]["c_hat"], 2);
    assert_eq!(r["inputs"]["tol"], "1/8");
}

#[test]
fn chartab_gl2_f2() {
    let f = catalog_dir().join("gl2_flag.json");
    let (code, r, _) = run(&["chartab", "--scenario", f.to_str().unwrap(), "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["chartab"]["degrees"], serde_json::json!([1, 1, 2]));
}

#[test]
fn report_written_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let (code, _, _) =
        run(&["mult", "--scenario", "gl2_p1xp1", "--seed", "3", "--out", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["inputs"]["seed"], 3);
    let echo: Scenario = serde_json::from_value(r["scenario"].clone()).unwrap();
    assert_eq!(echo.name, "gl2_p1xp1");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "group": {"kind": "GL", "n": 2}, "space": {"kind": "point"}, "q": 3, "max_ext": 2, "colour": 1}"#)
        .unwrap();
    let (code, _, err) = run(&["mult", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("colour"), "{err}");

    let (code, _, _) = run(&["bound", "--scenario", "gl2_flag", "--q", "6"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["chartab", "--scenario", "gl2_flag", "--ell", "29"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["bound", "--scenario", "gl2_flag", "--tol", "0/1"]);
    assert_eq!(code, 1);

    // Tight tolerance: the estimate does not converge, which is a verdict failure.
    let (code, r, _) = run(&["bound", "--scenario", "gl2_flag", "--max-ext", "2", "--tol", "1/1000"]);
    assert_eq!(code, 2);
    assert_eq!(r["verdicts"]["converged"], false);
}

#[test]
fn verify_all_odd_q_suite() {
    let dir = tempfile::tempdir().unwrap();
    for s in catalog().into_iter().filter(|s| s.q != 2) {
        std::fs::write(dir.path().join(format!("{}.json", s.name)), s.to_json()).unwrap();
    }
    let (code, r, _) = run(&["verify-all", "--suite", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{r:#}");
    assert_eq!(r["entries"].as_array().unwrap().len(), 6);
}
