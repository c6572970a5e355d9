//! JSON file formats for representations and Jordan data.
//!
//! A representation file looks like
//!
//! ```json
//! {"name": "stern", "k": 2, "dim": 2,
//!  "matrices": [[1, 0, 1, 1], [1, 1, 0, 1]],
//!  "terminal": [0, 1], "selector": [1, 0]}
//! ```
//!
//! Each matrix is row-major, either flat or as nested rows. Entries are JSON
//! integers or `"p/q"` strings. JSON floats are rejected.

use std::path::Path;

use num_traits::ToPrimitive;
use regmeas_core::dilation::JordanData;
use regmeas_core::{parse_rational, BigInt, LinearRepresentation, QMatrix, RMatrix, Rational};
use serde_json::{json, Map, Value};

use crate::AppError;

fn invalid(msg: impl Into<String>) -> AppError {
    AppError::InvalidRep(msg.into())
}

fn entry(v: &Value, what: &str) -> Result<Rational, AppError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(BigInt::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(BigInt::from(u)))
            } else {
                Err(invalid(format!("{what}: float {n} is not exact; write it as \"p/q\"")))
            }
        }
        Value::String(s) => parse_rational(s).map_err(|e| invalid(format!("{what}: {e}"))),
        other => Err(invalid(format!("{what}: expected an integer or \"p/q\", got {other}"))),
    }
}

fn vector(v: &Value, what: &str) -> Result<Vec<Rational>, AppError> {
    let arr = v
        .as_array()
        .ok_or_else(|| invalid(format!("{what} must be an array")))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| entry(x, &format!("{what}[{i}]")))
        .collect()
}

/// Flat row-major entries from either `[a, b, c, d]` or `[[a, b], [c, d]]`.
fn flat_entries(v: &Value, what: &str) -> Result<Vec<Rational>, AppError> {
    let arr = v
        .as_array()
        .ok_or_else(|| invalid(format!("{what} must be an array")))?;
    if arr.iter().all(Value::is_array) && !arr.is_empty() {
        let mut out = Vec::new();
        for (i, row) in arr.iter().enumerate() {
            out.extend(vector(row, &format!("{what} row {i}"))?);
        }
        Ok(out)
    } else {
        vector(v, what)
    }
}

fn as_count(v: Option<&Value>, what: &str) -> Result<u64, AppError> {
    v.and_then(Value::as_u64)
        .ok_or_else(|| invalid(format!("{what} must be a non-negative integer")))
}

pub fn rep_from_json(text: &str) -> Result<LinearRepresentation, AppError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| invalid(format!("malformed JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| invalid("top level must be an object"))?;
    let k = as_count(obj.get("k"), "k")?;
    let dim = as_count(obj.get("dim"), "dim")? as usize;
    if k < 2 || k > u32::MAX as u64 {
        return Err(invalid(format!("base k = {k} must be at least 2")));
    }
    if dim == 0 {
        return Err(invalid("dim must be at least 1"));
    }
    let mats = obj
        .get("matrices")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("matrices must be an array"))?;
    if mats.len() as u64 != k {
        return Err(invalid(format!("{} matrices given for base {k}", mats.len())));
    }
    let mut digit = Vec::with_capacity(mats.len());
    for (a, m) in mats.iter().enumerate() {
        let what = format!("matrices[{a}]");
        let entries = flat_entries(m, &what)?;
        if entries.len() != dim * dim {
            return Err(invalid(format!(
                "{what} has {} entries, expected {}",
                entries.len(),
                dim * dim
            )));
        }
        digit.push(QMatrix::from_row_major(dim, dim, entries).map_err(|e| invalid(e.to_string()))?);
    }
    let terminal = vector(obj.get("terminal").unwrap_or(&Value::Null), "terminal")?;
    if terminal.len() != dim {
        return Err(invalid(format!("terminal has length {}, expected {dim}", terminal.len())));
    }
    let selector = match obj.get("selector") {
        None | Some(Value::Null) => None,
        Some(s) => Some(vector(s, "selector")?),
    };
    let rep = LinearRepresentation::new(k as u32, digit, terminal, selector)
        .map_err(|e| invalid(e.to_string()))?;
    Ok(match obj.get("name") {
        Some(Value::String(n)) => rep.with_name(n.clone()),
        None | Some(Value::Null) => rep,
        Some(_) => return Err(invalid("name must be a string")),
    })
}

pub fn read_rep(path: &Path) -> Result<LinearRepresentation, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    rep_from_json(&text)
}

fn entry_json(q: &Rational) -> Value {
    if q.is_integer() {
        if let Some(i) = q.numer().to_i64() {
            return json!(i);
        }
    }
    Value::String(regmeas_core::rational::format_rational(q))
}

fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(entry_json).collect())
}

pub fn rep_to_value(rep: &LinearRepresentation) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), json!(rep.name().unwrap_or("unnamed")));
    obj.insert("k".into(), json!(rep.base()));
    obj.insert("dim".into(), json!(rep.dim()));
    obj.insert(
        "matrices".into(),
        Value::Array(rep.digit_matrices().iter().map(|m| vector_json(m.entries())).collect()),
    );
    obj.insert("terminal".into(), vector_json(rep.terminal()));
    obj.insert("selector".into(), vector_json(rep.selector()));
    Value::Object(obj)
}

pub fn rep_to_json(rep: &LinearRepresentation) -> String {
    let mut s = serde_json::to_string_pretty(&rep_to_value(rep)).expect("serialisable");
    s.push('\n');
    s
}

fn float(v: &Value, what: &str) -> Result<f64, AppError> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| invalid(format!("{what} is not a number"))),
        Value::String(s) => parse_rational(s)
            .map(|q| regmeas_core::rational::to_f64(&q))
            .map_err(|e| invalid(format!("{what}: {e}"))),
        _ => Err(invalid(format!("{what} must be a number"))),
    }
}

fn floats(v: Option<&Value>, what: &str) -> Result<Vec<f64>, AppError> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| invalid(format!("{what} must be an array")))?;
    let mut out = Vec::new();
    for (i, x) in arr.iter().enumerate() {
        match x {
            Value::Array(row) => {
                for (j, y) in row.iter().enumerate() {
                    out.push(float(y, &format!("{what}[{i}][{j}]"))?);
                }
            }
            _ => out.push(float(x, &format!("{what}[{i}]"))?),
        }
    }
    Ok(out)
}

/// Reads `{"rho", "v", "V", "M"}`; `V` is `d x v`, row-major flat or nested rows.
pub fn jordan_from_json(text: &str, dim: usize) -> Result<JordanData, AppError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| invalid(format!("malformed JSON: {e}")))?;
    let rho = float(doc.get("rho").unwrap_or(&Value::Null), "rho")?;
    let v = as_count(doc.get("v"), "v")? as usize;
    let basis = floats(doc.get("V"), "V")?;
    let m = floats(doc.get("M"), "M")?;
    if v == 0 || basis.len() != dim * v {
        return Err(invalid(format!("V has {} entries, expected {dim} x {v}", basis.len())));
    }
    if m.len() != v {
        return Err(invalid(format!("M has {} entries, expected {v}", m.len())));
    }
    let r_gap = match doc.get("r_gap") {
        Some(x) => float(x, "r_gap")?,
        None => 0.0,
    };
    let basis = RMatrix::from_row_major(dim, v, basis).map_err(|e| invalid(e.to_string()))?;
    JordanData::from_parts(rho, basis, m, r_gap).map_err(|e| invalid(e.to_string()))
}

pub fn read_jordan(path: &Path, dim: usize) -> Result<JordanData, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    jordan_from_json(&text, dim)
}

pub fn jordan_to_value(j: &JordanData) -> Value {
    let rows: Vec<Vec<f64>> = (0..j.basis.rows()).map(|r| j.basis.row(r).to_vec()).collect();
    json!({"rho": j.rho, "v": j.v, "V": rows, "M": j.m, "r_gap": j.r_gap})
}
