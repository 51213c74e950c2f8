//! Machine-readable reports with deterministic key order.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use rounding_core::circles::NumericReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OPERATIONAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Floats in reports: 17 significant digits, as strings.
pub fn float(x: f64) -> Value {
    Value::String(format!("{x:.16e}"))
}

/// SHA-256 over each input (length-prefixed) followed by the parameters.
pub fn digest(inputs: &[&[u8]], params: &str) -> String {
    let mut h = Sha256::new();
    for input in inputs {
        h.update((input.len() as u64).to_le_bytes());
        h.update(input);
    }
    h.update(params.as_bytes());
    hex::encode(h.finalize())
}

pub struct Report {
    pub command: &'static str,
    pub inputs_digest: String,
    pub verdicts: Map<String, Value>,
    pub witnesses: Map<String, Value>,
    pub oracle: Option<Value>,
    pub exit_status: i32,
}

impl Report {
    pub fn new(command: &'static str, inputs_digest: String) -> Self {
        Report {
            command,
            inputs_digest,
            verdicts: Map::new(),
            witnesses: Map::new(),
            oracle: None,
            exit_status: EXIT_OK,
        }
    }

    pub fn verdict(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.verdicts.insert(key.into(), value.into());
        self
    }

    pub fn witness(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.witnesses.insert(key.into(), value.into());
        self
    }

    pub fn to_json(&self) -> Value {
        // serde_json's default map is ordered by key
        json!({
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "verdicts": self.verdicts,
            "witnesses": self.witnesses,
            "oracle": self.oracle.clone().unwrap_or(Value::Null),
            "exit_status": self.exit_status,
        })
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn oracle_json(r: &NumericReport) -> Value {
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "trial": v.trial,
                "through_origin": v.through_origin,
                "base": v.base.iter().copied().map(float).collect::<Vec<_>>(),
                "dir": v.dir.iter().copied().map(float).collect::<Vec<_>>(),
                "points": v.points,
                "kind": format!("{:?}", v.kind).to_lowercase(),
                "residual": float(v.residual),
                "relative_residual": float(v.relative_residual),
            })
        })
        .collect();
    json!({
        "trials": r.trials,
        "seed": r.seed,
        "tol": float(r.tol),
        "max_residual": float(r.max_residual),
        "violation_count": r.violations.len(),
        "violations": violations,
        "skipped": r.skipped,
        "passed": r.passed(),
    })
}
