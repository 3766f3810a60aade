use std::process::Command;

use bispec_cli::run;
use serde_json::Value;

fn bispec(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bispec"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, stdout, _) = bispec(args);
    (code, serde_json::from_str(&stdout).unwrap())
}

#[test]
fn verify_holding_entry_exits_zero() {
    let (code, v) = json(&["verify", "hermite-exc:k=2"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["exit_code"], 0);
    assert_eq!(v["verdicts"][0]["holds"], true);
    assert!(v["provenance"][0]
        .as_str()
        .unwrap()
        .starts_with("hermite-exc:k=2"));
}

#[test]
fn stdout_is_deterministic_with_sorted_keys() {
    let a = bispec(&["verify", "ansatz:A5-5A3+4A1:5"]);
    let b = bispec(&["verify", "ansatz:A5-5A3+4A1:5"]);
    assert_eq!(a.1, b.1);
    let keys: Vec<usize> = [
        "\"command\"",
        "\"error\"",
        "\"exit_code\"",
        "\"inputs\"",
        "\"results\"",
        "\"schema\"",
    ]
    .iter()
    .map(|k| a.1.find(k).unwrap())
    .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn fit_weights_resolves_the_printed_step_two_weight() {
    let (code, v) = json(&[
        "fit-weights",
        "--catalog",
        "laguerre-step:2",
        "--orders",
        "7,5,3,1",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["dimension"], 1);
    assert_eq!(v["results"]["basis"][0]["weights"]["1"], "-36");
    assert_eq!(v["verdicts"][0]["holds"], false);
}

#[test]
fn reach_and_hermite_weights() {
    let (code, v) = json(&["reach-weights", "--n", "3", "--step", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["label"], "A7-14A5+49A3-36A1");
    let (_, v) = json(&["hermite-new-weights", "--k", "3"]);
    assert_eq!(v["results"]["label"], "A5-80A3+1024A1");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(bispec(&["verify", "no-such-entry"]).0, 2);
    assert_eq!(bispec(&["frobnicate"]).0, 2);
    let (code, v) = json(&[
        "ad", "--params", "k", "--L", "x^2 + q", "--theta", "x", "--j", "1",
    ]);
    assert_eq!(code, 2);
    let msg = v["error"].as_str().unwrap();
    assert!(msg.contains("`q`") && msg.contains('k'), "{msg}");
}

#[test]
fn degree_limit_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_bispec"))
        .args(["verify", "laguerre-step:1"])
        .env("BISPEC_MAX_DEGREE", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("exceeds the configured limit 3"));
    let bad = Command::new(env!("CARGO_BIN_EXE_bispec"))
        .args(["reach-weights", "--n", "1"])
        .env("BISPEC_MAX_DEGREE", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn darboux_reports_eigenvalue_and_rejects_bad_seeds() {
    let r = run(["bispec", "darboux", "--L", "x^2", "--seed", "x*exp(-x^2/2)"]);
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.results["steps"][0]["eigenvalue"], "3");
    let r = run(["bispec", "darboux", "--L", "x^2", "--seed", "x + 1"]);
    assert_eq!(r.exit_code, 1);
    assert_eq!(r.verdicts[0].claim, "seed 0 is an eigenfunction");
}

#[test]
fn heisenberg_closed_form() {
    let r = run([
        "bispec",
        "heisenberg",
        "--catalog-id",
        "hermite:oscillator",
        "--order",
        "6",
    ]);
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.results["omega_squared"], "4");
    let r = run([
        "bispec",
        "heisenberg",
        "--catalog-id",
        "hermite-exc:k=1",
        "--order",
        "4",
    ]);
    assert_eq!(r.exit_code, 1);
    assert_eq!(r.results["omega_squared"], "16");
}

#[test]
fn gen_system_forced_relations() {
    let r = run(["bispec", "gen-system", "--weights", "A2-4A0"]);
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.results["forced"]["c3"], "1/3*a1");
    assert_eq!(r.results["forced"]["c2"], "0");
    let r = run(["bispec", "gen-system", "--weights", "4:1,2:-40,0:144"]);
    assert_eq!(r.results["forced"]["c5"], "a3");
    assert_eq!(r.results["equations"].as_array().unwrap().len(), 11);
}

#[test]
fn solve_theta_from_inline_operator() {
    let r = run([
        "bispec",
        "solve-theta",
        "--L",
        "x^2 + 2/x^2",
        "--weights",
        "A3-16A1",
        "--deg",
        "3",
    ]);
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.results["basis"], serde_json::json!(["x^2"]));
}

#[test]
fn catalog_list_and_help() {
    let r = run(["bispec", "catalog", "list"]);
    let ids: Vec<&str> = r
        .results
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"matrix:hermite:1") && ids.contains(&"laguerre-step:3:corrected"));
    let (code, stdout, _) = bispec(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("gen-system"));
}

#[test]
fn verify_all_is_sorted_and_fails_exactly_on_the_misprints() {
    let r = run(["bispec", "verify", "--all"]);
    assert_eq!(r.exit_code, 1);
    let claims: Vec<&str> = r
        .verdicts
        .iter()
        .map(|v| v.claim.split(": ").next().unwrap())
        .collect();
    let mut sorted = claims.clone();
    sorted.sort_unstable();
    assert_eq!(claims, sorted);
    let failing: Vec<&str> = r
        .verdicts
        .iter()
        .filter(|v| !v.holds)
        .map(|v| v.claim.split(": ").next().unwrap())
        .collect();
    assert_eq!(
        failing,
        [
            "ansatz:A4-40A2+144A0:10",
            "ansatz:A4-40A2+144A0:8",
            "ansatz:A4-40A2+144A0:9",
            "laguerre-step:2",
            "laguerre-step:3",
            "matrix:laguerre:1a",
            "matrix:laguerre:1b",
            "matrix:laguerre:2",
        ]
    );
}

#[test]
fn operators_may_start_with_a_minus_sign() {
    let r = run([
        "bispec",
        "ad",
        "--L",
        "-D^2 + x^2",
        "--theta",
        "-x",
        "--j",
        "3",
    ]);
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.results["operator"], "8*D");
}
