//! End-to-end runs of the command-line tool.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use supergaudin::io::{RootsFile, SolveReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supergaudin")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const ONE_POINT: &str = r#"{"schema": "supergaudin/1", "m": 2, "n": 1, "parities": "010",
    "sites": [{"z": "0", "module": [1, 1]}], "l": [1, 1]}"#;

fn matrix(v: &Value) -> Vec<Vec<i64>> {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn structure_distinguished_gl43() {
    let out = run(&["structure", "4", "3", "--parities", "distinguished", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(
        matrix(&v["symmetrized"]),
        vec![
            vec![2, -1, 0, 0, 0, 0],
            vec![-1, 2, -1, 0, 0, 0],
            vec![0, -1, 2, -1, 0, 0],
            vec![0, 0, -1, 0, 1, 0],
            vec![0, 0, 0, 1, -2, 1],
            vec![0, 0, 0, 0, 1, -2],
        ]
    );
    assert_eq!(v["simple_root_parities"][3], "odd");
}

#[test]
fn structure_gl21_odd_odd() {
    let out = run(&["structure", "2", "1", "--parities", "010", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(matrix(&json(&out)["symmetrized"]), vec![vec![0, 1], vec![1, 0]]);
}

#[test]
fn structure_rank_zero() {
    let out = run(&["structure", "1", "0"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("no simple roots"));
}

#[test]
fn structure_rejects_bad_parities() {
    assert_eq!(code(&run(&["structure", "2", "1", "--parities", "100"])), 2);
    assert_eq!(code(&run(&["structure", "2", "1", "--parities", "0x1"])), 2);
    assert_eq!(code(&run(&["structure", "2", "1", "--parities", "011"])), 2);
}

#[test]
fn solve_two_boxes() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "p.json",
        r#"{"schema": "supergaudin/1", "m": 2, "n": 1, "parities": "010",
            "sites": [{"z": ["1", "0"], "module": "box"}, {"z": ["0", "0"], "module": "box"}], "l": [1, 0]}"#,
    );
    let report = dir.path().join("r.json");
    let out = run(&["solve", path(&p), "--out", path(&report)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("1/2"));
    let rep = SolveReport::parse(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep.solutions.len(), 1);
    let e: Vec<f64> = rep.solutions[0].eigenvalues.iter().map(|x| x[0].parse().unwrap()).collect();
    assert!((e[0] + 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
    let r: f64 = rep.solutions[0].roots[0][0].parse().unwrap();
    assert!((r - 0.5).abs() < 1e-12);
}

#[test]
fn solve_gl11_three_sites() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "p.json",
        r#"{"schema": "supergaudin/1", "m": 1, "n": 1,
            "sites": [{"z": "0", "module": "box"}, {"z": "3/2", "module": "box"}, {"z": "-7/3", "module": "box"}]}"#,
    );
    let out = run(&["solve", path(&p), "--json"]);
    assert_eq!(code(&out), 0);
    let rep = SolveReport::parse(&stdout(&out)).unwrap();
    assert_eq!(rep.solutions.len(), 4);
    assert_eq!(rep.singular_dimension, Some(4));
    let two: Vec<_> = rep.solutions.iter().filter(|s| s.l == [2]).collect();
    assert_eq!(two.len(), 1);
    assert_eq!(two[0].roots.len(), 2);
}

#[test]
fn solve_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "p.json",
        r#"{"schema": "supergaudin/1", "m": 2, "n": 1,
            "sites": [{"z": "0", "module": "box"}, {"z": "1", "module": [2]}], "l": [0, 0]}"#,
    );
    let out = run(&["solve", path(&p), "--json"]);
    assert_eq!(code(&out), 0);
    let rep = SolveReport::parse(&stdout(&out)).unwrap();
    assert_eq!(rep.method, "trivial");
    let e: Vec<f64> = rep.solutions[0].eigenvalues.iter().map(|x| x[0].parse().unwrap()).collect();
    // Eigenvalue of H_1 on the top vector: (e1, 2 e1) / (z1 - z2) = 2 / (0 - 1).
    assert!((e[0] + 2.0).abs() < 1e-12 && (e[1] - 2.0).abs() < 1e-12);
}

#[test]
fn solve_respects_size_cap() {
    let out = run(&["complete", "2", "1", "--z", "0 1 2 3", "--max-dim", "10"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn solve_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let dup = write(
        dir.path(),
        "p.json",
        r#"{"schema": "supergaudin/1", "m": 1, "n": 1,
            "sites": [{"z": "0", "module": "box"}, {"z": "0", "module": "box"}], "l": [1]}"#,
    );
    assert_eq!(code(&run(&["solve", path(&dup)])), 2);
    let junk = write(dir.path(), "q.json", "{not json");
    assert_eq!(code(&run(&["solve", path(&junk)])), 2);
    assert_eq!(code(&run(&["solve", path(&dir.path().join("missing.json"))])), 2);
}

#[test]
fn verify_one_point_solution() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", ONE_POINT);
    let good = write(
        dir.path(),
        "good.json",
        r#"{"schema": "supergaudin/1", "solutions": [{"l": [1, 1], "roots": [["2", "0"], ["1", "0"]]}]}"#,
    );
    let out = run(&["verify", path(&p), path(&good), "--json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["entries"][0]["exact_residual_zero"], true);

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"schema": "supergaudin/1", "solutions": [{"l": [1, 1], "roots": [["2.1", "0"], ["1", "0"]]}]}"#,
    );
    let out = run(&["verify", path(&p), path(&bad), "--json"]);
    assert_ne!(code(&out), 0);
    assert_eq!(json(&out)["entries"][0]["residual_ok"], false);
}

#[test]
fn verify_pole_collision() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", ONE_POINT);
    let pole = write(
        dir.path(),
        "pole.json",
        r#"{"schema": "supergaudin/1", "solutions": [{"l": [1, 1], "roots": [["0", "0"], ["1", "0"]]}]}"#,
    );
    assert_eq!(code(&run(&["verify", path(&p), path(&pole)])), 5);
}

#[test]
fn verify_accepts_solve_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", ONE_POINT);
    let report = dir.path().join("r.json");
    assert_eq!(code(&run(&["solve", path(&p), "--out", path(&report)])), 0);
    assert_eq!(code(&run(&["verify", path(&p), path(&report)])), 0);
    let roots = RootsFile::parse(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(roots.solutions.len(), 1);
}

#[test]
fn complete_gl11_three_sites() {
    let out = run(&["complete", "1", "1", "--z", "0", "--z", "3/2", "--z", "-7/3", "--json"]);
    assert_eq!(code(&out), 0);
    let rep = SolveReport::parse(&stdout(&out)).unwrap();
    assert_eq!(rep.solutions.len(), 4);
    assert_eq!(rep.brute_force_match, Some(true));
    assert_eq!(rep.simple_spectrum, Some(true));
}

#[test]
fn complete_gl21_two_sites() {
    let out = run(&["complete", "2", "1", "--z", "0 1", "--parities", "010", "--json"]);
    assert_eq!(code(&out), 0);
    let rep = SolveReport::parse(&stdout(&out)).unwrap();
    // box (x) box = (2) + (1,1): one Bethe vector per Pieri component.
    assert_eq!(rep.solutions.len(), 2);
    assert_eq!(rep.singular_dimension, Some(2));
    assert_eq!(rep.brute_force_match, Some(true));
}

#[test]
fn gl11_command() {
    let out = run(&["gl11", "--z", "0 3/2 -7/3", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(SolveReport::parse(&stdout(&out)).unwrap().solutions.len(), 4);
    let out = run(&["gl11", "--z", "0 1", "--r", "1 2", "--l", "1", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&run(&["gl11", "--z", "0 1", "--r", "1"])), 2);
}

#[test]
fn gl21_command() {
    let out = run(&["gl21", "--r1", "2", "--r2", "1", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["families"][1]["first"][0], "2");
    assert_eq!(v["families"][1]["second"][0], "1");
    assert_eq!(code(&run(&["gl21", "--r1", "1", "--r2", "2"])), 2);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let args = ["complete", "2", "1", "--z", "0 1 -2", "--seed", "5", "--json"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let rep = SolveReport::parse(&a).unwrap();
    assert_eq!(rep.to_json().trim(), a.trim());
}
