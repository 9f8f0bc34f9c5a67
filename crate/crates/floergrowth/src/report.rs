//! JSON report values with certification tags, and the text view over them.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

/// How far a reported number can be trusted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cert {
    /// Exact integer or rational arithmetic.
    Exact,
    /// A rigorous enclosure `[lower, upper]`.
    Interval,
    /// Floating point, accurate to the given tolerance.
    Float(f64),
}

impl Cert {
    pub fn tag(&self) -> String {
        match self {
            Cert::Exact => "exact".into(),
            Cert::Interval => "certified-interval".into(),
            Cert::Float(tol) => format!("float({tol:e})"),
        }
    }
}

pub const CERT_KEY: &str = "certification";

/// `{"value": v, "certification": tag}`
pub fn tagged(value: Value, cert: Cert) -> Value {
    json!({ "value": value, CERT_KEY: cert.tag() })
}

/// Adds the certification tag to an object.
pub fn with_cert(mut obj: Value, cert: Cert) -> Value {
    if let Value::Object(m) = &mut obj {
        m.insert(CERT_KEY.into(), Value::String(cert.tag()));
    }
    obj
}

/// JSON number when it fits in `i64`, decimal string otherwise.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn uint(x: &BigUint) -> Value {
    int(&BigInt::from(x.clone()))
}

/// Integers as [`int`], others as `"p/q"`.
pub fn rational(x: &BigRational) -> Value {
    if x.is_integer() {
        int(&x.to_integer())
    } else {
        Value::String(x.to_string())
    }
}

/// Finite floats as numbers; `"inf"`, `"-inf"`, `"nan"` otherwise.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

/// `[re, im]`
pub fn complex(z: Complex64) -> Value {
    json!([float(z.re), float(z.im)])
}

/// Indented `key: value` lines, one scalar per line.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| scalar(x).is_some() && !x.is_array() && !x.is_object()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        Value::Array(a)
            if a.iter().all(|x| {
                x.as_array()
                    .is_some_and(|r| r.iter().all(|y| !y.is_array() && !y.is_object()))
            }) =>
        {
            Some(format!(
                "[{}]",
                a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
            ))
        }
        Value::Object(m) if m.len() == 2 && m.contains_key("value") && m.contains_key(CERT_KEY) => {
            let inner = scalar(&m["value"])?;
            Some(format!("{inner} ({})", m[CERT_KEY].as_str().unwrap_or("")))
        }
        _ => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => render_map(m, indent, out),
        Value::Array(a) => {
            for item in a {
                match scalar(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render(item, indent + 1, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

fn render_map(m: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    for (k, v) in m {
        match scalar(v) {
            Some(s) => {
                let _ = writeln!(out, "{pad}{k}: {s}");
            }
            None => {
                let _ = writeln!(out, "{pad}{k}:");
                render(v, indent + 1, out);
            }
        }
    }
}
