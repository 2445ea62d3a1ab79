//! Report documents, schema "krverify-report/1". See docs/report-schema.md.

use std::time::Duration;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use krverify_core::fermionic::TermStats;
use krverify_core::symbolic::{GradedPoly, HalfInt};

pub const SCHEMA: &str = "krverify-report/1";

pub struct Report {
    command: &'static str,
    input: Value,
    result: Value,
    passed: bool,
    wall_clock_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &'static str, input: Value, result: Value, passed: bool) -> Self {
        Self {
            command,
            input,
            result,
            passed,
            wall_clock_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn set_wall_clock(&mut self, d: Duration) {
        self.wall_clock_ms = Some(d.as_millis());
    }

    pub fn render(&self) -> String {
        let mut doc = Map::new();
        doc.insert("schema".into(), SCHEMA.into());
        doc.insert(
            "tool".into(),
            json!({ "name": "krverify", "version": env!("CARGO_PKG_VERSION") }),
        );
        doc.insert("command".into(), self.command.into());
        doc.insert("input".into(), self.input.clone());
        doc.insert("passed".into(), self.passed.into());
        doc.insert("result".into(), self.result.clone());
        if let Some(ms) = self.wall_clock_ms {
            doc.insert("wall_clock_ms".into(), json!(ms as u64));
        }
        serde_json::to_string_pretty(&Value::Object(doc)).expect("report serializes")
    }
}

pub fn big(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn half_int(e: HalfInt) -> String {
    if e.is_integral() {
        (e.twice() / 2).to_string()
    } else {
        format!("{}/2", e.twice())
    }
}

/// `{"text", "terms": [[exponent, coefficient], ...], "value_at_1"}`.
pub fn poly(p: &GradedPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(e, c)| json!([half_int(e), c.to_string()]))
        .collect();
    json!({
        "text": p.to_string(),
        "terms": terms,
        "value_at_1": big(&p.value_at_one()),
    })
}

pub fn stats(s: &TermStats) -> Value {
    json!({
        "total": s.total,
        "restricted": s.restricted,
        "negative_nonzero": s.negative_nonzero,
        "negative_zero": s.negative_zero,
        "scope_divergent": s.scope_divergent,
        "tail_violations": s.tail_violations,
    })
}
