//! Versioned JSON reports. `serde_json` maps keep keys sorted, so output is
//! byte-for-byte deterministic.

use serde_json::{json, Map, Value};

pub const REPORT_VERSION: &str = "1";

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub input: Value,
    pub result: Value,
    pub evidence: Vec<Value>,
    pub citations: Vec<String>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, input: Value) -> Self {
        Report {
            command: command.into(),
            input,
            result: Value::Null,
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "version": REPORT_VERSION,
            "command": self.command,
            "input": self.input,
            "result": self.result,
            "evidence": self.evidence,
            "citations": self.citations,
            "diagnostics": self.diagnostics,
        })
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("json values serialize")
    }
}

/// Builds an object from string keys.
pub fn object<I, K>(pairs: I) -> Value
where
    I: IntoIterator<Item = (K, Value)>,
    K: Into<String>,
{
    Value::Object(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect::<Map<_, _>>())
}
