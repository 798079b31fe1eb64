//! Acceptance suite: nine criteria, one line each. Runs without the libtest
//! harness so the lines are printed on every run, not only on failure.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::{Command, ExitCode};

use serde_json::Value;

use circle_ideals::roots::RootConfig;
use circle_ideals::verify::{Check, CheckOutcome};
use circle_ideals::Divisor;

const SEED: u64 = 42;
const BIN: &str = env!("CARGO_BIN_EXE_circle-ideals");

fn run(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(BIN).args(args).env("NO_COLOR", "1").output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, stdout) = run(args);
    (code, serde_json::from_slice(&stdout).expect("stdout is JSON"))
}

fn divisor_from_json(v: &Value) -> Divisor {
    Divisor::from_angles(v.as_array().expect("divisor array").iter().map(|e| {
        (e["theta"].as_f64().expect("theta"), e["mult"].as_u64().expect("mult") as u32)
    }))
}

fn check(c: Check, cases: usize) -> Result<String, String> {
    let CheckOutcome { cases, failures, first_failure, .. } = c.run(SEED, cases, &RootConfig::default());
    match first_failure {
        None => Ok(format!("{cases}/{cases} cases")),
        Some(f) => Err(format!("{failures} of {cases} cases failed; first: {f}")),
    }
}

fn non_ufd_demo() -> Result<String, String> {
    let (code, v) = json(&["demo", "nonufd"]);
    let gap = v["coefficient_gap"].as_f64().unwrap_or(f64::INFINITY);
    let divs = &v["factor_divisors"];
    let expect = [
        ("cos(x)", vec![(FRAC_PI_2, 1), (3.0 * FRAC_PI_2, 1)]),
        ("1 + sin(x)", vec![(3.0 * FRAC_PI_2, 2)]),
        ("1 - sin(x)", vec![(FRAC_PI_2, 2)]),
    ];
    for (name, want) in expect {
        let got = divisor_from_json(&divs[name]);
        if !got.approx_eq(&Divisor::from_angles(want), 1e-6) {
            return Err(format!("divisor of {name} is {got}"));
        }
    }
    let product = divisor_from_json(&v["product_divisor"]);
    let lengths: Vec<u64> = v["lengths"].as_array().map(|a| a.iter().filter_map(Value::as_u64).collect()).unwrap_or_default();
    if code != 0 || gap > 1e-12 {
        return Err(format!("exit {code}, coefficient gap {gap:e}"));
    }
    if !product.approx_eq(&Divisor::from_angles([(FRAC_PI_2, 2), (3.0 * FRAC_PI_2, 2)]), 1e-6) || lengths != [2, 2] {
        return Err(format!("product divisor {product}, factorization lengths {lengths:?}"));
    }
    Ok(format!("coefficient gap {gap:e}, 2 factorizations of length 2"))
}

fn generator_extraction() -> Result<String, String> {
    let random = check(Check::IdealFromGenerators, 50)?;
    let (code, v) = json(&["ideal", "sin(x)*(1-cos(x))", "sin(x)*(1+cos(x))"]);
    let d = divisor_from_json(&v["divisor"]);
    if code != 0 || !d.approx_eq(&Divisor::from_angles([(0.0, 1), (PI, 1)]), 1e-6) {
        return Err(format!("worked example gave {d} (exit {code})"));
    }
    Ok(format!("{random}; worked example {d}"))
}

fn determinism() -> Result<String, String> {
    let (c1, a) = run(&["verify", "--seed", "42"]);
    let (c2, b) = run(&["verify", "--seed", "42"]);
    if c1 != 0 || c2 != 0 {
        return Err(format!("exit codes {c1} and {c2}"));
    }
    if a != b {
        return Err("outputs differ".into());
    }
    Ok(format!("{} identical bytes, exit 0", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<String, String>); 9] = [
        ("non-UFD demo", non_ufd_demo),
        ("even zero count", || check(Check::EvenZeroCount, 500)),
        ("parity and principality", || check(Check::ParityPrincipality, 200)),
        ("class group Z/2", || check(Check::ClassGroup, 200)),
        ("divisor of a generated ideal", generator_extraction),
        ("complex ring is principal", || check(Check::ComplexPid, 50)),
        ("half-factorial", || check(Check::HalfFactorial, 40)),
        ("oracle equivalence", || check(Check::OracleEquivalence, 100)),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} ({name}): PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
