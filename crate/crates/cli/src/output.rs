//! Deterministic JSON and CSV emission.
//!
//! JSON numbers carry 17 significant digits, CSV numbers 10. Files are
//! written to `<path>.partial` and renamed once complete.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::Value;

/// `v` with 17 significant digits, or `null` when not finite.
pub fn json_number(v: f64) -> String {
    if !v.is_finite() {
        return "null".to_owned();
    }
    if v == 0.0 {
        return "0.0".to_owned();
    }
    format!("{v:.16e}")
}

/// `v` with 10 significant digits.
pub fn csv_number(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    format!("{v:.9e}")
}

/// Pretty-printed JSON with fixed key order and number formatting.
pub fn to_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&json_number(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.iter().all(|v| !v.is_array() && !v.is_object()) {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, depth + 1);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                indent(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, v, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push('}');
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn partial_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".partial");
    PathBuf::from(name)
}

/// Writes `contents` to `path` through a `.partial` sibling.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let tmp = partial_path(path);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn number_formats() {
        assert_eq!(json_number(1.0 / 45.0), "2.2222222222222223e-2");
        assert_eq!(json_number(4.0), "4.0000000000000000e0");
        assert_eq!(json_number(f64::NAN), "null");
        assert_eq!(csv_number(1.0 / 3.0), "3.333333333e-1");
        assert_eq!(csv_number(0.0), "0");
    }

    #[test]
    fn json_round_trips_and_keeps_order() {
        let v = json!({"z": 0.1, "a": [1.0, 2.5], "m": {"k": 3, "s": "x"}});
        let text = to_json(&v);
        assert!(text.find("\"z\"").unwrap() < text.find("\"a\"").unwrap());
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["z"].as_f64(), Some(0.1));
        assert_eq!(back["m"]["k"].as_u64(), Some(3));
    }

    #[test]
    fn atomic_write_leaves_no_partial() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, "{}\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "{}\n");
        assert!(!partial_path(&path).exists());
    }
}
