use std::path::PathBuf;
use std::process::{Command, Output};

fn golden() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eisenpole")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn cosets_cubic() {
    let o = run(&["cosets", "--form", "cubic-galois"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn cosets_split_json() {
    let o = run(&["cosets", "--form", "split", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().map(|a| a.len()), Some(24));
}

#[test]
fn cosets_quad() {
    let o = run(&["cosets", "--form", "quad"]);
    assert!(stdout(&o).contains("2,1,3,2,1,3,2"));
}

#[test]
fn table_diff() {
    let g = golden();
    let o = run(&["tables", "--which", "5", "--diff", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("42 cells match"));
}

#[test]
fn table_csv() {
    let o = run(&["tables", "--which", "11", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| !l.is_empty()).count(), 25);
}

#[test]
fn all_tables() {
    let o = run(&["tables", "--which", "all", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().map(|a| a.len()), Some(9));
}

#[test]
fn verify_cancellations() {
    let o = run(&["verify", "--suite", "cancellations"]);
    let out = stdout(&o);
    assert!(out.contains("split order-4 class sum vanishes: PASS"), "{out}");
    // the transcribed cubic constant disagrees with the computed one
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_exponents() {
    let o = run(&["verify", "--suite", "exponents"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exceptions = 4 triples"));
}

#[test]
fn verify_cap() {
    let o = run(&["verify", "--suite", "cap"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3 forms, 3 unique survivors"));
}

#[test]
fn gh_orders() {
    for (n, order, contradiction) in [(0, 5, false), (1, 3, false), (2, 1, true), (3, -1, true)] {
        let o = run(&["gh", "--s-size", &n.to_string(), "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["theta_order"], order);
        assert_eq!(v["contradiction"], contradiction);
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["tables", "--which", "all", "--format", "json"]);
    let b = run(&["tables", "--which", "all", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["cosets", "--form", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["tables", "--which", "13"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["gk", "--form", "split", "--word", "11"]).status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
