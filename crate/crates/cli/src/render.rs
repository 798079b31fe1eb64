//! JSON and text forms of engine values.
//!
//! Angles are radians in `[0, 2π)` rounded to 12 significant digits; every
//! JSON document carries `"schema": 1`.

use serde_json::{json, Map, Value};

use circle_ideals::{Divisor, TrigPoly};

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub struct Output {
    pub json: Value,
    pub text: String,
}

impl Output {
    /// Wraps `fields` in a document with the schema tag first.
    pub fn new(fields: Value, text: String) -> Self {
        let mut doc = Map::new();
        doc.insert("schema".into(), json!(SCHEMA));
        if let Value::Object(m) = fields {
            doc.extend(m);
        }
        Output { json: Value::Object(doc), text }
    }
}

/// `x` rounded to 12 significant digits.
pub fn angle(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn divisor_json(d: &Divisor) -> Value {
    Value::Array(
        d.entries()
            .iter()
            .map(|e| json!({"theta": angle(e.point.theta()), "mult": e.multiplicity}))
            .collect(),
    )
}

pub fn divisor_text(d: &Divisor) -> String {
    if d.is_empty() {
        return "{}".into();
    }
    let parts: Vec<String> = d
        .entries()
        .iter()
        .map(|e| format!("{}:{}", angle(e.point.theta()), e.multiplicity))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Coefficients `a_0..a_n` and `b_1..b_n`, plus a parseable rendering.
pub fn trigpoly_json(t: &TrigPoly) -> Value {
    json!({
        "degree": t.degree(),
        "cos": t.cos_coeffs(),
        "sin": t.sin_coeffs(),
        "expression": t.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_keep_twelve_digits() {
        assert_eq!(angle(std::f64::consts::PI), 3.14159265359);
        assert_eq!(angle(0.0), 0.0);
        assert_eq!(angle(1.5), 1.5);
    }

    #[test]
    fn schema_comes_first() {
        let out = Output::new(json!({"a": 1}), String::new());
        let text = serde_json::to_string(&out.json).unwrap();
        assert_eq!(text, r#"{"schema":1,"a":1}"#);
    }
}
