//! Machine-readable output document shared by every subcommand: a stable,
//! versioned schema whose counts are decimal strings (never floats), with
//! diagnostics as a channel distinct from hard errors.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "pext/1";

#[derive(Serialize)]
pub struct OutputDocument {
    pub schema: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    pub diagnostics: Vec<String>,
}

impl OutputDocument {
    pub fn new(command: &str) -> Self {
        OutputDocument {
            schema: SCHEMA,
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: Value::Object(Map::new()),
            diagnostics: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    /// Inserts a result; counts and exact rationals must arrive as strings.
    pub fn result(&mut self, key: &str, value: Value) -> &mut Self {
        if let Value::Object(map) = &mut self.results {
            map.insert(key.to_string(), value);
        }
        self
    }

    pub fn result_str(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.result(key, Value::String(value.to_string()))
    }

    pub fn diagnostic(&mut self, text: impl ToString) -> &mut Self {
        self.diagnostics.push(text.to_string());
        self
    }

    /// Deterministic JSON: the maps are ordered, nothing time-dependent is
    /// included, so identical inputs yield byte-identical output.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Plain-text rendering of the same content.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.command);
        if !self.inputs.is_empty() {
            let args: Vec<String> = self
                .inputs
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            out.push_str(&format!("({})", args.join(", ")));
        }
        out.push('\n');
        if let Value::Object(map) = &self.results {
            for (key, value) in map {
                out.push_str(&format!("  {key} = {}\n", render_value(value)));
            }
        }
        for d in &self.diagnostics {
            out.push_str(&format!("  diagnostic: {d}\n"));
        }
        out
    }
}

fn render_value(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).expect("value serializes"),
    }
}
