use std::path::Path;
use std::process::Command;

use hanoi_uniform::load_edge_list;
use hanoi_uniform_cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("hanoi-uniform").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_proper_graph() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.dug");
    let (code, out, _) = call(&[
        "generate",
        "--r",
        "4",
        "--k",
        "2",
        "--proper",
        "--out",
        path_str(&file),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("16 vertices"), "{out}");
    let g = load_edge_list(&file).unwrap();
    assert_eq!(g.n(), 16);
    assert_eq!(g.label(0), Some("1,0"));
}

#[test]
fn generate_from_plan() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.dug");
    let (code, out, _) = call(&[
        "--json",
        "generate",
        "--n",
        "300",
        "--epsilon",
        "12/100",
        "--out",
        path_str(&file),
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], 300);
    assert_eq!(load_edge_list(&file).unwrap().n(), 300);
}

#[test]
fn solve_prints_fifteen_moves() {
    let (code, out, _) = call(&[
        "solve", "--r", "5", "--k", "4", "--from", "1,2,1,2", "--to", "3,4,3,4", "--proper",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("15 moves"));
    assert_eq!(lines.next().unwrap().split_whitespace().count(), 15);
}

#[test]
fn solve_json_and_bad_state() {
    let (code, out, _) = call(&[
        "--json", "solve", "--r", "3", "--k", "2", "--from", "1,0", "--to", "1,0",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["length"], 0);
    assert_eq!(v["verified"], true);

    let (code, _, err) = call(&[
        "solve", "--r", "3", "--k", "2", "--from", "1,1", "--to", "1,0",
    ]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn verify_table() {
    let (code, out, _) = call(&["verify", "--r", "4", "--k", "3"]);
    assert_eq!(code, 0, "{out}");
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("verify r=4 k=3"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|l| l.starts_with("PASS")), "{out}");
}

#[test]
fn analyze_report_and_checks() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.dug");
    let f = path_str(&file);
    assert_eq!(
        call(&["generate", "--r", "5", "--k", "2", "--proper", "--out", f]).0,
        0
    );

    let (code, out, _) = call(&["--json", "analyze", "--in", f, "--bounds"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], 25);
    assert_eq!(v["d"], 3);
    assert_eq!(v["epsilon"], "12/25");
    assert_eq!(v["diameter"], 3);

    let (code, out, _) = call(&["analyze", "--in", f, "--epsilon", "12/25", "--d", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("true"));
    let (code, _, _) = call(&["analyze", "--in", f, "--epsilon", "11/25", "--d", "3"]);
    assert_eq!(code, 1);

    let (code, out, _) = call(&["analyze", "--in", f, "--sample", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("sources\t5"), "{out}");
}

#[test]
fn plan_direct_mode() {
    let (code, out, _) = call(&["plan", "--n", "65536", "--epsilon", "1/16"]);
    assert_eq!(code, 0);
    assert!(out.contains("mode\tdirect"), "{out}");
    assert!(out.contains("r k\t256 2"), "{out}");
    let (code, out, _) = call(&["--json", "plan", "--n", "300", "--epsilon", "1/10"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mode"], "degenerate");
}

#[test]
fn truncate_and_blowup() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.dug");
    let b = dir.path().join("b.dug");
    let (code, out, _) = call(&["truncate", "--r", "3", "--k", "2", "--out", path_str(&t)]);
    assert_eq!(code, 0);
    assert!(out.contains("12 vertices, 18 edges"), "{out}");
    let (code, _, _) = call(&[
        "blowup",
        "--in",
        path_str(&t),
        "--n",
        "30",
        "--out",
        path_str(&b),
    ]);
    assert_eq!(code, 0);
    assert_eq!(load_edge_list(&b).unwrap().n(), 30);
    let (code, _, err) = call(&[
        "blowup",
        "--in",
        path_str(&t),
        "--n",
        "5",
        "--out",
        path_str(&b),
    ]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["solve", "--r", "3"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_hanoi-uniform"))
        .args([
            "--threads",
            "2",
            "solve",
            "--r",
            "4",
            "--k",
            "3",
            "--from",
            "1,2,1",
            "--to",
            "3,4,3",
            "--proper",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("7 moves"));
    let bad = Command::new(env!("CARGO_BIN_EXE_hanoi-uniform"))
        .arg("plan")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
