//! Deterministic JSON text: keys sorted, floats rounded to a fixed number of
//! decimals with trailing zeros dropped. Nonzero magnitudes below `1e-3` use
//! the same number of digits in scientific form so they do not collapse to 0.

use serde_json::Value;

/// Decimals used by every report except lossless diagram dumps.
pub const REPORT_DECIMALS: usize = 6;

fn number(n: &serde_json::Number, decimals: Option<usize>) -> String {
    if n.is_i64() || n.is_u64() {
        return n.to_string();
    }
    let x = n.as_f64().unwrap_or(f64::NAN);
    match decimals {
        None => n.to_string(),
        Some(d) if x != 0.0 && x.abs() < 1e-3 => {
            let s = format!("{x:.d$e}");
            let (mantissa, exp) = s.split_once('e').unwrap_or((&s, "0"));
            let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
            format!("{mantissa}e{exp}")
        }
        Some(d) => {
            let s = format!("{x:.d$}");
            let s = if s.contains('.') {
                s.trim_end_matches('0').trim_end_matches('.').to_string()
            } else {
                s
            };
            if s == "-0" {
                "0".to_string()
            } else {
                s
            }
        }
    }
}

fn write(v: &Value, decimals: Option<usize>, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&number(n, decimals)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write(item, decimals, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write(&map[k], decimals, out);
            }
            out.push('}');
        }
    }
}

/// Report form: floats at [`REPORT_DECIMALS`].
pub fn report(v: &Value) -> String {
    let mut s = String::new();
    write(v, Some(REPORT_DECIMALS), &mut s);
    s
}

/// Lossless form: shortest round-trip floats.
pub fn lossless(v: &Value) -> String {
    let mut s = String::new();
    write(v, None, &mut s);
    s
}
