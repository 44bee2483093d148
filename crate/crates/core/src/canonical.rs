//! Canonical JSON: object keys sorted, floats printed with 17 significant
//! digits in exponent form, two-space indentation. Equal values always
//! serialize to identical bytes.

use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

/// Seventeen significant digits; parses back to the identical `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                write!(out, "{u}").unwrap();
            } else if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else {
                out.push_str(&format_f64(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // Arrays of scalars stay on one line.
            if items.iter().all(|x| !x.is_array() && !x.is_object()) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, depth);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_value(out, x, depth + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                indent(out, depth + 1);
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push_str(": ");
                write_value(out, &map[*k], depth + 1);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, depth);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serde_json::json;

    #[test]
    fn keys_sorted_and_floats_fixed() {
        let s = to_canonical_json(&json!({"b": 0.5, "a": [1, 2], "c": {"z": true, "y": null}})).unwrap();
        assert_eq!(
            s,
            "{\n  \"a\": [1, 2],\n  \"b\": 5.0000000000000000e-1,\n  \"c\": {\n    \"y\": null,\n    \"z\": true\n  }\n}\n"
        );
    }

    proptest! {
        #[test]
        fn floats_round_trip_bit_exact(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
            let s = to_canonical_json(&json!({"x": x})).unwrap();
            let back: serde_json::Value = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back["x"].as_f64().unwrap().to_bits(), x.to_bits());
        }
    }
}
