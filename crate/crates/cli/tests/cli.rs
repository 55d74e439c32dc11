use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_submodkit"))
        .args(args)
        .output()
        .unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn hypercube_three_words() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", "+++\n++-\n+-+\n");
    let out = run(&["hypercube", a.to_str().unwrap(), "--tau", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["per_d"][0]["E_d"], 2);
    assert_eq!(v["per_d"][1]["E_d"], 1);
    assert_eq!(v["all_hold"], true);
}

#[test]
fn han_on_product_pmf_is_tight() {
    let dir = TempDir::new().unwrap();
    let p = file(
        &dir,
        "p.txt",
        "pmf n=2 sizes=2,2\n0 0 1/4\n0 1 1/4\n1 0 1/4\n1 1 1/4\n",
    );
    let out = run(&["han", p.to_str().unwrap(), "--json"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"all_hold\": true"));
}

#[test]
fn nonzero_empty_value_is_a_precondition_error() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "f.txt", "setfn n=1\n0 1\n1 2\n");
    let out = run(&["check-setfn", f.to_str().unwrap(), "--sequences"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("f(∅) must be 0"), "{err}");
}

#[test]
fn parse_errors_report_line_and_column() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "f.txt", "setfn n=2\n00 0\n01 1\n1x 1\n11 2\n");
    let out = run(&["check-setfn", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4, column 2"), "{err}");
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = run(&["report", "/nonexistent/input.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn random_cover_needs_a_seed() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "f.txt", "setfn n=1\n0 0\n1 1\n");
    let out = run(&["shearer", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("--seed"));
    let out = run(&["shearer", f.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn report_json_covers_every_section_for_set_functions() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "f.txt", "setfn n=2\n00 0\n01 1\n10 1\n11 1.5\n");
    let out = run(&["report", f.to_str().unwrap(), "--seed", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "report");
    assert!(v.as_object().unwrap().len() > 4);
}
