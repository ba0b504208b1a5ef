//! Exit-code and output-shape behavior of the command line front end.

use std::path::PathBuf;
use std::process::{Command, Output};

fn dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("zlift-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write(name: &str, content: &str) -> String {
    let path = dir().join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

fn zlift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zlift")).args(args).output().unwrap()
}

#[test]
fn parse_errors_exit_2() {
    let bad = write("bad.vt", "n 5\nloop 0 1\nbogus record\n");
    assert_eq!(zlift(&["lift", &bad]).status.code(), Some(2));
    let missing = dir().join("does-not-exist.vt");
    assert_eq!(zlift(&["lift", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn hypothesis_violations_exit_3() {
    // An interior inverse pair is not odd shifting.
    let flat = write("flat.vt", "n 7\nloop 0 1\nloop 1 2\nloop 2 5\nloop 3 1\nedge 0 1 0\nedge 1 2 0\nedge 2 3 0\n");
    let out = zlift(&["ham-path", &flat]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd shifting"));
    // Odd track counts violate the 2-factor hypothesis.
    let p2 = write("p2.vt", "n 5\nloop 0 1\nloop 1 1\nedge 0 1 0\n");
    assert_eq!(zlift(&["two-factor", &p2, "--d", "3"]).status.code(), Some(3));
    // No label hypothesis applies.
    let mixed = write("mixed.it", "labels integer\nloop 0 2\nloop 1 3\nedge 0 1 0\n");
    assert_eq!(zlift(&["ham-prime", &mixed]).status.code(), Some(3));
    // Degree bound violation in the circumference wrapper.
    let star = write(
        "star.vt",
        "n 100\nloop 0 1\nloop 1 1\nloop 2 1\nloop 3 1\nedge 0 1 0\nedge 0 2 0\nedge 0 3 0\n",
    );
    assert_eq!(
        zlift(&["long-cycle", &star, "--epsilon", "0.5", "--delta", "1"]).status.code(),
        Some(3)
    );
}

#[test]
fn corrupted_cycles_fail_verify_with_4() {
    let p2 = write("p2v.vt", "n 5\nloop 0 1\nloop 1 1\nedge 0 1 0\n");
    let out = zlift(&["ham-path", &p2]);
    assert!(out.status.success());
    let mut artifact: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cycle = artifact["cycle"].as_array_mut().unwrap();
    cycle.pop();
    let broken = write("broken.json", &artifact.to_string());
    assert_eq!(zlift(&["verify", &p2, "--cycle", &broken]).status.code(), Some(4));
}

#[test]
fn modulus_override_changes_the_group() {
    let p2 = write("p2m.vt", "n 5\nloop 0 1\nloop 1 1\nedge 0 1 0\n");
    let out = zlift(&["lift", &p2, "--modulus", "9"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["n"], 9);
    assert_eq!(v["vertices"], 18);
}

#[test]
fn dot_output_marks_cycle_and_matchings() {
    let p2 = write("p2d.vt", "n 5\nloop 0 1\nloop 1 1\nedge 0 1 0\n");
    let out = zlift(&["ham-path", &p2, "--format", "dot"]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph lift {"));
    assert!(dot.contains("color=red"));
    assert!(dot.contains("style=dashed"));
}

#[test]
fn billiard_reports_pi_tables() {
    let fig = write(
        "fig1.vt",
        "n 5\nloop 0 1\nloop 1 2\nloop 2 1\nedge 0 1 0\nedge 1 2 0\n",
    );
    let out = zlift(&["billiard", &fig, "--r", "1", "--d", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["orders"], serde_json::json!([[0, 1], [1, 0]]));
    assert_eq!(v["arrivals"], serde_json::json!([0, 0, 3]));
    assert_eq!(v["validation"]["passed"], true);
}

#[test]
fn ham_prime_detects_the_applicable_condition() {
    // A wide tree where only the adjacent-pair condition applies.
    let wide = write(
        "wide.it",
        "labels integer\n\
         loop 0 2\nloop 1 1\nloop 2 1\nloop 3 2\nloop 4 2\nloop 5 3\n\
         loop 6 2\nloop 7 3\nloop 8 2\nloop 9 2\nloop 10 3\n\
         edge 0 1 0\nedge 1 2 0\nedge 2 3 0\nedge 1 4 0\nedge 2 5 0\n\
         edge 5 6 0\nedge 6 7 0\nedge 2 8 0\nedge 5 9 0\nedge 1 10 0\n",
    );
    let out = zlift(&["ham-prime", &wide, "--prime", "4003"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["construction"].as_str().unwrap().contains("adjacent-ones"));
    assert_eq!(v["validation"]["passed"], true);
}
