//! Black-box CLI tests: exit-code contract, byte determinism, and the
//! degree cap.

use std::process::Command;

fn run(args: &[&str], envs: &[(&str, &str)]) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_latops"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

const Q_LATTICE: &[&str] = &["--Q", "1/2", "--c1", "1", "--c2", "1", "--c3", "0"];

#[test]
fn lattice_info_is_deterministic_json() {
    let args: Vec<&str> = ["lattice-info"]
        .iter()
        .chain(Q_LATTICE)
        .chain(&["--format", "json"])
        .copied()
        .collect();
    let (a, _, code) = run(&args, &[]);
    let (b, _, _) = run(&args, &[]);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert!(a.contains("\"alpha\":\"5/4\""));
    assert!(a.contains("\"gamma_n\":\"5/2\""));
}

#[test]
fn op_apply_dx_square() {
    // D_x z^2 = 2 alpha z + 2 beta = (5/2) z on this lattice
    let args: Vec<&str> = ["op-apply", "--op", "dx", "--poly", "0,0,1"]
        .iter()
        .chain(Q_LATTICE)
        .chain(&["--format", "json"])
        .copied()
        .collect();
    let (out, _, code) = run(&args, &[]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"coeffs":["0","5/2"],"op":"dx"}"#);
}

#[test]
fn pearson_solve_matches_frozen_prefix() {
    let (out, _, code) = run(
        &[
            "pearson-solve", "--phi", "0,0,-1/2", "--psi", "1,0", "--beta", "0", "--c5",
            "2", "--c6", "0", "--n", "5", "--format", "json",
        ],
        &[],
    );
    assert_eq!(code, 0);
    assert_eq!(
        out.trim(),
        r#"{"moments":["1","0","1/2","0","-1/4","0"]}"#
    );
}

#[test]
fn usage_errors_exit_2() {
    // unknown subcommand
    let (_, _, code) = run(&["frobnicate"], &[]);
    assert_eq!(code, 2);
    // both lattice kinds at once
    let (_, err, code) = run(
        &["op-apply", "--op", "dx", "--poly", "1", "--Q", "1/2", "--c1", "1", "--beta", "1"],
        &[],
    );
    assert_eq!(code, 2);
    assert!(err.contains("usage error"));
    // malformed scalar
    let (_, _, code) = run(
        &["lattice-info", "--Q", "1/2", "--c1", "1/0", "--c2", "1", "--c3", "0"],
        &[],
    );
    assert_eq!(code, 2);
}

#[test]
fn math_errors_exit_1() {
    // a = 2 gives r = 4 = q^{-1}, an excluded parameter
    let args: Vec<&str> = ["verify", "thm1"]
        .iter()
        .chain(Q_LATTICE)
        .chain(&["--a", "2", "--n", "12", "--format", "json"])
        .copied()
        .collect();
    let (out, _, code) = run(&args, &[]);
    assert_eq!(code, 1);
    assert!(out.contains("excluded"));
}

#[test]
fn degree_cap_env_var() {
    let args: Vec<&str> = ["verify", "thm1"]
        .iter()
        .chain(Q_LATTICE)
        .chain(&["--a", "3", "--n", "12"])
        .copied()
        .collect();
    let (_, err, code) = run(&args, &[("LATOPS_MAX_DEGREE", "5")]);
    assert_eq!(code, 2);
    assert!(err.contains("LATOPS_MAX_DEGREE"));
    let (_, _, code) = run(&args, &[("LATOPS_MAX_DEGREE", "50")]);
    assert_eq!(code, 0);
}

#[test]
fn selftest_passes_and_is_deterministic() {
    let args = ["selftest", "--n", "6", "--seed", "3", "--format", "json"];
    let (a, _, code) = run(&args, &[]);
    let (b, _, _) = run(&args, &[]);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert!(!a.contains("\"status\":\"fail\""));
}

#[test]
fn verify_bzero_csv_row() {
    let args: Vec<&str> = ["verify", "bzero"]
        .iter()
        .chain(Q_LATTICE)
        .chain(&["--b0", "1", "--format", "csv"])
        .copied()
        .collect();
    let (out, _, code) = run(&args, &[]);
    assert_eq!(code, 0);
    assert!(out.contains("b-route-mismatch,0,10,pass,2,8/17,-5/13"));
}
