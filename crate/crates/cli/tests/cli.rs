use std::f64::consts::{FRAC_PI_2, PI};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_circle-ideals");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env("NO_COLOR", "1").output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap_or(-1)
}

fn json(args: &[&str]) -> Value {
    serde_json::from_slice(&run(args).stdout).expect("stdout is JSON")
}

fn zeros(v: &Value) -> Vec<(f64, u64)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|e| (e["theta"].as_f64().unwrap(), e["mult"].as_u64().unwrap()))
        .collect()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10
}

#[test]
fn roots_of_cos_squared() {
    let v = json(&["roots", "cos(x)^2"]);
    assert_eq!(v["schema"], 1);
    let z = zeros(&v["zeros"]);
    assert_eq!(z.len(), 2);
    assert!(close(z[0].0, FRAC_PI_2) && z[0].1 == 2);
    assert!(close(z[1].0, 3.0 * FRAC_PI_2) && z[1].1 == 2);
    assert_eq!(v["total"], 4);
    assert_eq!(v["even"], true);
}

#[test]
fn ideal_worked_example() {
    let v = json(&["ideal", "sin(x)*(1-cos(x))", "sin(x)*(1+cos(x))"]);
    let z = zeros(&v["divisor"]);
    assert_eq!(z.len(), 2);
    assert!(close(z[0].0, 0.0) && close(z[1].0, PI));
    assert_eq!(v["principal"], true);
    assert_eq!(v["class"], "Principal");
    // the generator is sin x up to rounding
    let g = &v["generator"];
    assert!((g["sin"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(g["cos"].as_array().unwrap().iter().all(|c| c.as_f64().unwrap().abs() < 1e-12));
}

#[test]
fn odd_generator_explains_itself() {
    let out = run(&["generator", "--points", "0:1"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], "OddDegree");
    assert_eq!(v["class"], "NonPrincipal");
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn even_generator_round_trips() {
    let v = json(&["generator", "--points", "pi/2:2, 3*pi/2:2"]);
    assert_eq!(v["round_trip"]["matches"], true);
    assert_eq!(v["generator"]["degree"], 2);
}

#[test]
fn factorization_listing() {
    let v = json(&["factorizations", "--points", "0.1:1, 1:1, 2.5:1, 4:1"]);
    assert_eq!(v["count"], 3);
    assert_eq!(v["half_factorial"], true);
    assert_eq!(v["factorizations"].as_array().unwrap().len(), 3);
    let s = json(&["factorizations", "--summary", "--points", "0.1:1, 1:1, 2.5:1, 4:1"]);
    assert!(s.get("factorizations").is_none());
}

#[test]
fn complex_generator_of_a_single_point() {
    let v = json(&["complex-generator", "--points", "0:1"]);
    let c = v["coefficients"].as_array().unwrap();
    assert_eq!(c.len(), 2);
    assert_eq!(c[0][0], -1.0);
    assert_eq!(c[1][0], 1.0);
    assert_eq!(v["round_trip"]["matches"], true);
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(code(&["roots", "cos(x)^2"]), 0);
    assert_eq!(code(&["no-such-command"]), 1);
    assert_eq!(code(&["roots"]), 1);
    assert_eq!(code(&["roots", "0"]), 1);
    assert_eq!(code(&["factorizations", "--points", "0:3"]), 1);
    assert_eq!(code(&["roots", "cos(x^2)"]), 2);
    assert_eq!(code(&["roots", "cos(x"]), 2);
    assert_eq!(code(&["generator", "--points", "0:one"]), 2);
    assert_eq!(code(&["roots", "cos(x)^2", "--max-iter", "1"]), 3);
    assert_eq!(code(&["verify", "--cases", "2", "--max-iter", "2"]), 4);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn parse_errors_point_at_the_problem() {
    let out = run(&["roots", "cos(x^2)"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cos(x^2)\n      ^"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn text_format() {
    let out = run(&["--format", "text", "roots", "1 - sin(x)"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("zeros: {1.57079632679:2}"), "{text}");
    assert!(text.contains("total: 2"));
}

#[test]
fn verify_is_deterministic_and_seed_dependent() {
    let a = run(&["verify", "--seed", "7", "--cases", "5"]);
    let b = run(&["verify", "--seed", "7", "--cases", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 13);
}
