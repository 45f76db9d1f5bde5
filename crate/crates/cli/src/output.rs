//! Report emission: a single JSON document on stdout, or a flat
//! `key = value` table.

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Table,
}

pub fn emit(doc: &Value, format: OutputFormat) {
    match format {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(doc).expect("report serializes"));
        }
        OutputFormat::Table => {
            let mut lines = Vec::new();
            flatten(doc, String::new(), &mut lines);
            for line in lines {
                println!("{line}");
            }
        }
    }
}

fn flatten(value: &Value, prefix: String, out: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(v, key, out);
            }
        }
        Value::Array(items) => {
            if items.iter().all(|v| !v.is_object() && !v.is_array()) {
                let joined: Vec<String> = items.iter().map(render_scalar).collect();
                out.push(format!("{prefix} = [{}]", joined.join(", ")));
            } else {
                for (i, v) in items.iter().enumerate() {
                    flatten(v, format!("{prefix}[{i}]"), out);
                }
            }
        }
        other => out.push(format!("{prefix} = {}", render_scalar(other))),
    }
}

fn render_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
