//! Deterministic CLI reports: a fixed envelope (tool, version, command,
//! input digest) around a command-specific payload, rendered as stable JSON
//! or as aligned text. Output is byte-identical across runs on identical
//! inputs; elapsed time is reported on stderr only.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input_digest: String,
    /// Constant marker: wall-clock timing goes to stderr so that reports
    /// stay reproducible byte-for-byte.
    pub timing: String,
    pub payload: Value,
}

impl Report {
    pub fn new(command: &str, input: &[u8], payload: Value) -> Report {
        let digest = Sha256::digest(input);
        Report {
            tool: "orbikit".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input_digest: format!("sha256:{digest:x}"),
            timing: "stderr".to_string(),
            payload,
        }
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("tool         {} {}\n", self.tool, self.version));
        out.push_str(&format!("command      {}\n", self.command));
        out.push_str(&format!("input_digest {}\n", self.input_digest));
        out.push('\n');
        render_value(&mut out, &self.payload, 0, None);
        out
    }
}

fn is_scalar(v: &Value) -> bool {
    matches!(v, Value::Null | Value::Bool(_) | Value::Number(_) | Value::String(_))
}

fn scalar_to_string(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => unreachable!("non-scalar"),
    }
}

fn render_value(out: &mut String, v: &Value, indent: usize, label: Option<&str>) {
    let pad = "  ".repeat(indent);
    match v {
        _ if is_scalar(v) => {
            match label {
                Some(l) => out.push_str(&format!("{pad}{l}: {}\n", scalar_to_string(v))),
                None => out.push_str(&format!("{pad}{}\n", scalar_to_string(v))),
            };
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            let row =
                items.iter().map(scalar_to_string).collect::<Vec<_>>().join(", ");
            match label {
                Some(l) => out.push_str(&format!("{pad}{l}: [{row}]\n")),
                None => out.push_str(&format!("{pad}[{row}]\n")),
            };
        }
        Value::Array(items) => {
            if let Some(l) = label {
                out.push_str(&format!("{pad}{l}:\n"));
            }
            for (i, item) in items.iter().enumerate() {
                out.push_str(&format!("{pad}- #{i}\n"));
                render_value(out, item, indent + 1, None);
            }
        }
        Value::Object(map) => {
            if let Some(l) = label {
                out.push_str(&format!("{pad}{l}:\n"));
                for (k, val) in map {
                    render_value(out, val, indent + 1, Some(k));
                }
            } else {
                for (k, val) in map {
                    render_value(out, val, indent, Some(k));
                }
            }
        }
        _ => unreachable!(),
    }
}
