//! One function per subcommand. Each composes library calls and builds the
//! report; printing and exit codes are left to `main`.

use std::fmt::Write;

use serde_json::{json, Value};

use circle_ideals::expr::parse_points;
use circle_ideals::factorization::{demo_nonufd as build_demo, FactorizationError, Factorization};
use circle_ideals::roots::{circle_divisor, circle_divisor_report, polynomial_circle_divisor, RootConfig};
use circle_ideals::verify::run_all;
use circle_ideals::{
    enumerate_factorizations, is_half_factorial, parse_trigpoly, Divisor, GeneratorSet, IdealError, IdealR,
    ParseError, RootError,
};

use crate::render::{angle, divisor_json, divisor_text, trigpoly_json, Output};
use crate::{warn, Failure, EXIT_NUMERICAL, EXIT_PARSE, EXIT_USAGE, EXIT_VERIFY};

/// Agreement demanded of round-trip divisor checks, radians.
const ROUND_TRIP_TOL: f64 = 1e-6;

type CmdResult = Result<Output, Failure>;

fn failure(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into(), output: None }
}

fn parse_failure(input: &str, e: ParseError) -> Failure {
    let column = input[..e.position().min(input.len())].chars().count();
    let caret = format!("{}^", " ".repeat(column));
    failure(EXIT_PARSE, format!("{e}\n  {input}\n  {caret}"))
}

fn root_failure(e: RootError) -> Failure {
    let code = match e {
        RootError::NonConvergence(_) => EXIT_NUMERICAL,
        RootError::ZeroPolynomial | RootError::InvalidConfig(_) => EXIT_USAGE,
    };
    failure(code, e.to_string())
}

fn ideal_failure(e: IdealError) -> Failure {
    match e {
        IdealError::Root(r) => root_failure(r),
        other => failure(EXIT_USAGE, other.to_string()),
    }
}

fn factorization_failure(e: FactorizationError) -> Failure {
    match e {
        FactorizationError::Root(r) => root_failure(r),
        other => failure(EXIT_USAGE, other.to_string()),
    }
}

fn points(text: &str) -> Result<Divisor, Failure> {
    parse_points(text).map_err(|e| parse_failure(text, e))
}

fn checked(cfg: &RootConfig) -> Result<(), Failure> {
    cfg.validate().map_err(root_failure)
}

pub fn roots(expr: &str, cfg: &RootConfig) -> CmdResult {
    checked(cfg)?;
    let t = parse_trigpoly(expr).map_err(|e| parse_failure(expr, e))?;
    let report = circle_divisor_report(&t, cfg).map_err(root_failure)?;
    for w in &report.warnings {
        warn(w);
    }
    let d = &report.divisor;
    let even = d.degree() % 2 == 0;
    let text = format!(
        "T(x) = {t}\nzeros: {}\ntotal: {}\neven: {even}\n",
        divisor_text(d),
        d.degree()
    );
    Ok(Output::new(
        json!({
            "expression": expr,
            "polynomial": trigpoly_json(&t),
            "zeros": divisor_json(d),
            "total": d.degree(),
            "even": even,
        }),
        text,
    ))
}

pub fn ideal(exprs: &[String], cfg: &RootConfig) -> CmdResult {
    checked(cfg)?;
    let gens = exprs
        .iter()
        .map(|e| parse_trigpoly(e).map_err(|err| parse_failure(e, err)))
        .collect::<Result<Vec<_>, _>>()?;
    let set = GeneratorSet::new(gens).map_err(ideal_failure)?;
    let d = set.divisor(cfg).map_err(ideal_failure)?;
    let ideal = IdealR::new(d.clone());
    let generator = if ideal.is_principal() {
        Some(ideal.real_generator().map_err(ideal_failure)?)
    } else {
        None
    };
    let mut text = format!(
        "divisor: {}\ndegree: {}\nprincipal: {}\nclass: {}\n",
        divisor_text(&d),
        d.degree(),
        ideal.is_principal(),
        ideal.class()
    );
    if let Some(g) = &generator {
        let _ = writeln!(text, "generator: {g}");
    }
    Ok(Output::new(
        json!({
            "generators": exprs,
            "divisor": divisor_json(&d),
            "degree": d.degree(),
            "principal": ideal.is_principal(),
            "class": ideal.class().to_string(),
            "generator": generator.as_ref().map(trigpoly_json),
        }),
        text,
    ))
}

pub fn generator(points_text: &str, cfg: &RootConfig) -> CmdResult {
    checked(cfg)?;
    let d = points(points_text)?;
    let ideal = IdealR::new(d.clone());
    match ideal.real_generator() {
        Ok(g) => {
            let found = circle_divisor(&g, cfg).map_err(root_failure)?;
            let matches = found.approx_eq(&d, ROUND_TRIP_TOL);
            let error = d.max_point_distance(&found);
            let text = format!(
                "divisor: {}\nclass: {}\ngenerator: {g}\nround trip: {} ({})\n",
                divisor_text(&d),
                ideal.class(),
                divisor_text(&found),
                if matches { "matches" } else { "MISMATCH" }
            );
            let out = Output::new(
                json!({
                    "divisor": divisor_json(&d),
                    "degree": d.degree(),
                    "principal": true,
                    "class": ideal.class().to_string(),
                    "generator": trigpoly_json(&g),
                    "round_trip": {
                        "divisor": divisor_json(&found),
                        "matches": matches,
                        "max_point_error": error,
                    },
                }),
                text,
            );
            if matches {
                Ok(out)
            } else {
                Err(Failure {
                    code: EXIT_NUMERICAL,
                    message: "the generator's zeros do not reproduce the divisor".into(),
                    output: Some(out),
                })
            }
        }
        Err(IdealError::OddDegree { degree }) => {
            let explanation = format!(
                "the divisor has odd degree {degree}; a real trigonometric polynomial has an even number \
                 of zeros on the circle counted with multiplicity, so no single element generates this ideal"
            );
            let decomposition = ideal.odd_case_decomposition().map_err(ideal_failure)?;
            let text = format!(
                "divisor: {}\nclass: {}\nno generator: {explanation}\nideal = m_p * ({}) with p = {}\n",
                divisor_text(&d),
                ideal.class(),
                decomposition.1,
                angle(decomposition.0.theta())
            );
            let out = Output::new(
                json!({
                    "divisor": divisor_json(&d),
                    "degree": degree,
                    "principal": false,
                    "class": ideal.class().to_string(),
                    "error": "OddDegree",
                    "explanation": explanation,
                    "decomposition": {
                        "maximal_point": angle(decomposition.0.theta()),
                        "principal_part": trigpoly_json(&decomposition.1),
                    },
                }),
                text,
            );
            Err(Failure {
                code: EXIT_USAGE,
                message: format!("odd degree {degree}: the ideal is not principal"),
                output: Some(out),
            })
        }
        Err(e) => Err(ideal_failure(e)),
    }
}

fn factorization_json(f: &Factorization) -> Value {
    Value::Array(
        f.factors
            .iter()
            .map(|x| json!([angle(x.p.theta()), angle(x.q.theta())]))
            .collect(),
    )
}

fn factorization_text(f: &Factorization) -> String {
    let parts: Vec<String> = f
        .factors
        .iter()
        .map(|x| format!("({}, {})", angle(x.p.theta()), angle(x.q.theta())))
        .collect();
    parts.join(" ")
}

pub fn factorizations(points_text: &str, summary: bool, cfg: &RootConfig) -> CmdResult {
    checked(cfg)?;
    let d = points(points_text)?;
    let report = is_half_factorial(&d).map_err(factorization_failure)?;
    let mut text = format!(
        "divisor: {}\nfactorizations: {}\nlengths: {:?}\nhalf-factorial: {}\n",
        divisor_text(&d),
        report.count,
        report.lengths,
        report.half_factorial
    );
    let mut doc = json!({
        "divisor": divisor_json(&d),
        "degree": d.degree(),
        "half_factorial": report.half_factorial,
        "count": report.count,
        "lengths": report.lengths,
        "expected_length": report.expected_length,
    });
    if !summary {
        let all = enumerate_factorizations(&d).map_err(factorization_failure)?;
        for (i, f) in all.iter().enumerate() {
            let _ = writeln!(text, "{}: {}", i + 1, factorization_text(f));
        }
        doc["factorizations"] = all.iter().map(factorization_json).collect();
    }
    Ok(Output::new(doc, text))
}

pub fn complex_generator(points_text: &str, cfg: &RootConfig) -> CmdResult {
    checked(cfg)?;
    let d = points(points_text)?;
    let lp = IdealR::new(d.clone()).complex_generator();
    let poly = lp.polynomial_part();
    let found = polynomial_circle_divisor(poly, cfg).map_err(root_failure)?;
    let matches = found.approx_eq(&d, ROUND_TRIP_TOL);
    let coefficients: Vec<Value> = poly.iter().map(|c| json!([c.re, c.im])).collect();
    let mut text = format!("divisor: {}\ncoefficients (z^0 first):\n", divisor_text(&d));
    for (k, c) in poly.iter().enumerate() {
        let _ = writeln!(text, "  z^{k}: {} {:+}i", c.re, c.im);
    }
    let _ = writeln!(text, "round trip: {}", divisor_text(&found));
    let out = Output::new(
        json!({
            "divisor": divisor_json(&d),
            "degree": d.degree(),
            "coefficients": coefficients,
            "round_trip": {"divisor": divisor_json(&found), "matches": matches},
        }),
        text,
    );
    if matches {
        Ok(out)
    } else {
        Err(Failure {
            code: EXIT_NUMERICAL,
            message: "the generator's roots do not reproduce the divisor".into(),
            output: Some(out),
        })
    }
}

pub fn demo_nonufd(cfg: &RootConfig) -> CmdResult {
    checked(cfg)?;
    let demo = build_demo(cfg).map_err(factorization_failure)?;
    let equal = demo.coefficient_gap <= 1e-12;
    let lengths: Vec<usize> = demo.factorizations.iter().map(Factorization::len).collect();
    let mut text = format!(
        "cos(x)^2 = {}\n(1 + sin(x))*(1 - sin(x)) = {}\ncoefficient gap: {:e}\n\
         div cos(x) = {}\ndiv (1 + sin(x)) = {}\ndiv (1 - sin(x)) = {}\n\
         factorizations of {}: {}\n",
        demo.cos_squared,
        demo.sine_product,
        demo.coefficient_gap,
        divisor_text(&demo.cos_divisor),
        divisor_text(&demo.one_plus_sin_divisor),
        divisor_text(&demo.one_minus_sin_divisor),
        divisor_text(&demo.product_divisor),
        demo.factorizations.len()
    );
    for (i, f) in demo.factorizations.iter().enumerate() {
        let _ = writeln!(text, "{}: {}", i + 1, factorization_text(f));
    }
    Ok(Output::new(
        json!({
            "identity": "cos(x)^2 = (1 + sin(x))*(1 - sin(x))",
            "cos_squared": trigpoly_json(&demo.cos_squared),
            "sine_product": trigpoly_json(&demo.sine_product),
            "coefficient_gap": demo.coefficient_gap,
            "coefficientwise_equal": equal,
            "factor_divisors": {
                "cos(x)": divisor_json(&demo.cos_divisor),
                "1 + sin(x)": divisor_json(&demo.one_plus_sin_divisor),
                "1 - sin(x)": divisor_json(&demo.one_minus_sin_divisor),
            },
            "product_divisor": divisor_json(&demo.product_divisor),
            "factorizations": demo.factorizations.iter().map(factorization_json).collect::<Vec<_>>(),
            "lengths": lengths,
        }),
        text,
    ))
}

pub fn verify(seed: u64, cases: Option<usize>, cfg: &RootConfig) -> CmdResult {
    checked(cfg)?;
    let report = run_all(seed, cases, cfg);
    let mut text = format!("seed: {seed}\n");
    for c in &report.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        let _ = write!(text, "{verdict} {} ({}/{} cases)", c.name, c.cases - c.failures, c.cases);
        if let Some(f) = &c.first_failure {
            let _ = write!(text, ": {f}");
        }
        text.push('\n');
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(text, "{} of {} checks passed", report.checks.len() - failed, report.checks.len());
    let out = Output::new(serde_json::to_value(&report).expect("report serializes"), text);
    if report.passed {
        Ok(out)
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!("{failed} verification check(s) failed"),
            output: Some(out),
        })
    }
}
