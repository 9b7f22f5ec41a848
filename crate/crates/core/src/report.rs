//! Machine-readable analysis reports.
//!
//! Object keys are emitted in sorted order and floats are rounded to 12
//! significant digits so the same input always produces the same bytes.
//! Non-finite floats become `null`.

use serde::Serialize;
use serde_json::{Map, Number, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub input_descriptor: String,
    pub command: String,
    /// Norms the results were computed for (`"1"`, `"inf"`).
    pub p: Vec<String>,
    pub results: Value,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn new(command: impl Into<String>, input_descriptor: impl Into<String>) -> Self {
        AnalysisReport {
            input_descriptor: input_descriptor.into(),
            command: command.into(),
            p: Vec::new(),
            results: Value::Object(Map::new()),
            warnings: Vec::new(),
        }
    }

    pub fn to_value(&self) -> Value {
        canonicalize(serde_json::to_value(self).expect("report is serializable"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("value is serializable")
    }
}

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// A JSON number for `x`, or `null` when `x` is not finite.
pub fn number(x: f64) -> Value {
    Number::from_f64(round_significant(x)).map_or(Value::Null, Value::Number)
}

/// Serializes `value`, then applies float rounding recursively.
pub fn to_canonical<T: Serialize>(value: &T) -> Value {
    canonicalize(serde_json::to_value(value).unwrap_or(Value::Null))
}

/// Rounds every float in `v`. Keys are already sorted by `serde_json::Map`.
pub fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => number(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, canonicalize(v))).collect())
        }
        other => other,
    }
}
