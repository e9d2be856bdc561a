//! Report envelope and rendering.

use std::fmt::Display;
use std::path::PathBuf;

use num_rational::Ratio;
use serde_json::{json, Map, Value};

use crate::Format;

/// Output of one command: resolved parameters, results and whether every
/// check on the produced artifacts passed.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub result: Value,
    pub checks_passed: bool,
    /// Extra destination for the rendered report.
    pub path: Option<PathBuf>,
}

impl Report {
    pub fn new(command: &str, params: Value, result: Value) -> Self {
        Report {
            command: command.to_string(),
            params,
            result,
            checks_passed: true,
            path: None,
        }
    }

    pub fn checked(mut self, passed: bool) -> Self {
        self.checks_passed = passed;
        self
    }

    pub fn to(mut self, path: Option<PathBuf>) -> Self {
        self.path = path;
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.checks_passed {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tool": "rsgraph",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "params": self.params,
            "result": self.result,
            "checks_passed": self.checks_passed,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut lines = Vec::new();
                flatten("", &self.to_json(), &mut lines);
                let mut s = lines.join("\n");
                s.push('\n');
                s
            }
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                flatten(&join(k), inner, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, inner) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), inner, out);
            }
        }
        other => out.push(format!("{prefix} = {other}")),
    }
}

/// `p/q`, always with the denominator.
pub fn ratio<T: Display>(r: &Ratio<T>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Builds a JSON object from key/value pairs in order.
pub fn object<I: IntoIterator<Item = (&'static str, Value)>>(pairs: I) -> Value {
    Value::Object(
        pairs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}
