use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Slack on `lhs / rhs` absorbing rounding in long lattice sums.
pub const RATIO_TOL: f64 = 1e-9;

/// Outcome of one inequality evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
    /// Inputs needed to replay the check (seeds, parameters, secondary ratios).
    pub witness: BTreeMap<String, Value>,
    /// `lhs / rhs` with the unnamed constant set to 1, for inequalities whose constant is
    /// only known to exist.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub empirical_constant: Option<f64>,
}

pub fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs > 0.0 {
        lhs / rhs
    } else {
        f64::INFINITY
    }
}

impl InequalityVerdict {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let r = ratio(lhs, rhs);
        Self {
            name: name.into(),
            lhs,
            rhs,
            ratio: r,
            pass: r <= 1.0 + RATIO_TOL,
            witness: BTreeMap::new(),
            empirical_constant: None,
        }
    }

    /// Verdict for `lhs <= C * unit` with `C` capped at `cap`; records `lhs / unit`.
    pub fn with_cap(name: impl Into<String>, lhs: f64, unit: f64, cap: f64) -> Self {
        let mut v = Self::new(name, lhs, cap * unit);
        v.empirical_constant = Some(ratio(lhs, unit));
        v.witness.insert("constant_cap".into(), cap.into());
        v
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.witness.insert(key.to_string(), value.into());
        self
    }

    pub fn witness_f64(&self, key: &str) -> Option<f64> {
        self.witness.get(key).and_then(Value::as_f64)
    }
}
