use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::Outcome;

pub const SCHEMA: &str = "trisect/1";

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn envelope(outcome: &Outcome) -> Value {
    let mut obj = Map::new();
    obj.insert("schema".into(), SCHEMA.into());
    obj.insert("command".into(), outcome.command.into());
    match &outcome.body {
        Value::Object(body) => obj.extend(body.clone()),
        other => {
            obj.insert("result".into(), other.clone());
        }
    }
    Value::Object(obj)
}

/// `a.b[2].c: value` lines, one per scalar.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            out.push(format!("{prefix}: [{}]", items.join(", ")));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push(format!("{prefix}: {}", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(outcome: &Outcome, format: Format) -> String {
    let value = envelope(outcome);
    match format {
        Format::Json => serde_json::to_string_pretty(&value).expect("reports serialize") + "\n",
        Format::Text => match &outcome.text {
            Some(t) => t.clone(),
            None => {
                let mut lines = Vec::new();
                flatten("", &value, &mut lines);
                lines.join("\n") + "\n"
            }
        },
    }
}

pub fn write(rendered: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, rendered),
        None => std::io::stdout().lock().write_all(rendered.as_bytes()),
    }
}
