//! Deterministic structured reports.
//!
//! A report is an ordered list of keyed values; the text and JSON
//! renderings are byte-identical across runs on identical input. Timing is
//! only attached when explicitly requested, so default reports stay
//! reproducible.

use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    items: Vec<(String, Value)>,
    timing: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            items: Vec::new(),
            timing: None,
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: Value) {
        self.items.push((key.into(), value));
    }

    pub fn set_timing(&mut self, timing: String) {
        self.timing = Some(timing);
    }

    pub fn items(&self) -> &[(String, Value)] {
        &self.items
    }

    /// Human-readable rendering, one `key: value` line per item.
    pub fn text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (key, value) in &self.items {
            out.push_str(&format!("{}: {}\n", key, render(value)));
        }
        if let Some(t) = &self.timing {
            out.push_str(&format!("timing: {}\n", t));
        }
        out
    }

    /// JSON rendering preserving item order.
    pub fn json(&self) -> Value {
        let results: Vec<Value> = self
            .items
            .iter()
            .map(|(k, v)| json!({ "key": k, "value": v }))
            .collect();
        let mut obj = serde_json::Map::new();
        obj.insert("command".into(), Value::String(self.command.clone()));
        obj.insert("results".into(), Value::Array(results));
        if let Some(t) = &self.timing {
            obj.insert("timing".into(), Value::String(t.clone()));
        }
        Value::Object(obj)
    }
}

fn render(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).expect("report values serialize"),
    }
}
