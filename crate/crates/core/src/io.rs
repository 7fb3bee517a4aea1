//! JSON interchange for matrices, vector families, certificates and counterexamples.
//!
//! Numeric values are written as decimal strings: exact values as `p` or
//! `p/q`, floats in exponent form so they read back as floats to the same
//! bits. Indices, counts and signs stay JSON integers. Readers also accept
//! JSON numbers; integers are exact, anything else is float.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::bifunction::{default_labels, BiFunction};
use crate::error::{Error, Result};
use crate::geometry::{FaceCounterexample, IsometryWitness, ScaledVerdict, VectorSet};
use crate::rescaling::{Anchor, Counterexample, CycleNode, RescalingCertificate};
use crate::scalar::{format_float, parse_real, RealLiteral, Scalar};

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Compact JSON followed by a newline.
pub fn to_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| format_err(e.to_string()))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| format_err(format!("{}: {e}", path.display())))?;
    parse_json(&text)
}

fn literal(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        Value::Number(n) => Ok(format_float(n.as_f64().expect("finite JSON number"))),
        other => Err(format_err(format!("expected a number, got {other}"))),
    }
}

pub fn scalar_to_json(z: &Scalar) -> Value {
    let (re, im) = z.to_parts();
    json!([re, im])
}

/// Reads `[re, im]` or a bare real.
pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(Scalar::parse_parts(&literal(&parts[0])?, &literal(&parts[1])?)?),
        Value::Array(parts) => Err(format_err(format!("scalar needs 2 parts, got {}", parts.len()))),
        other => Ok(Scalar::parse_parts(&literal(other)?, "0")?),
    }
}

pub fn real_from_json(v: &Value) -> Result<f64> {
    let s = literal(v)?;
    Ok(match parse_real(&s)? {
        RealLiteral::Exact(q) => Scalar::from_rational(q).re_f64(),
        RealLiteral::Float(x) => x,
    })
}

/// The display form of a scalar, as used in minor reports.
pub fn scalar_string(z: &Scalar) -> String {
    z.to_string()
}

/// Inverse of [`scalar_string`]: `re`, `re+imi` or `re-imi`.
pub fn parse_scalar_string(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Scalar::parse_parts(t, "0")?);
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| format_err(format!("cannot parse `{s}` as a scalar")))?;
    let im = body[split..].strip_prefix('+').unwrap_or(&body[split..]);
    Ok(Scalar::parse_parts(&body[..split], im)?)
}

fn labels_from_json(v: Option<&Value>, n: usize) -> Result<Vec<String>> {
    match v {
        None => Ok(default_labels(n)),
        Some(Value::Array(items)) => items
            .iter()
            .map(|x| match x {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                other => Err(format_err(format!("label must be a string, got {other}"))),
            })
            .collect(),
        Some(other) => Err(format_err(format!("labels must be an array, got {other}"))),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| format_err(format!("{what} must be an array")))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| format_err(format!("missing field `{key}`")))
}

pub fn matrix_to_json(l: &BiFunction) -> Value {
    let rows: Vec<Value> = (0..l.size()).map(|i| Value::Array(l.row(i).iter().map(scalar_to_json).collect())).collect();
    json!({ "labels": l.labels(), "entries": rows })
}

pub fn matrix_from_json(v: &Value) -> Result<BiFunction> {
    let rows = array(field(v, "entries")?, "entries")?
        .iter()
        .map(|r| array(r, "matrix row")?.iter().map(scalar_from_json).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let labels = labels_from_json(v.get("labels"), rows.len())?;
    BiFunction::new(labels, rows)
}

pub fn read_matrix(path: &Path) -> Result<BiFunction> {
    matrix_from_json(&read_json(path)?)
}

pub fn vectors_to_json(v: &VectorSet) -> Value {
    let cols: Vec<Value> = v.columns().iter().map(|c| json!(c.iter().map(|&x| format_float(x)).collect::<Vec<_>>())).collect();
    json!({ "dimension": v.dimension(), "labels": v.labels(), "columns": cols })
}

pub fn vectors_from_json(v: &Value) -> Result<VectorSet> {
    let columns = array(field(v, "columns")?, "columns")?
        .iter()
        .map(|c| array(c, "column")?.iter().map(real_from_json).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let dimension = match v.get("dimension") {
        Some(d) => d.as_u64().ok_or_else(|| format_err("dimension must be a nonnegative integer"))? as usize,
        None => columns.first().map_or(0, Vec::len),
    };
    let labels = labels_from_json(v.get("labels"), columns.len())?;
    VectorSet::new(dimension, labels, columns)
}

pub fn read_vectors(path: &Path) -> Result<VectorSet> {
    vectors_from_json(&read_json(path)?)
}

fn node_json(node: CycleNode, labels: &[String]) -> Value {
    let (key, i) = match node {
        CycleNode::Row(i) => ("row", i),
        CycleNode::Column(i) => ("column", i),
        CycleNode::Point(i) => ("point", i),
    };
    let mut m = Map::new();
    m.insert(key.to_string(), json!(labels[i]));
    Value::Object(m)
}

fn anchor_json(a: &Anchor, labels: &[String]) -> Value {
    let mut v = node_json(a.node, labels);
    v.as_object_mut().expect("object").insert("component".to_string(), json!(a.component));
    v
}

pub fn certificate_to_json(c: &RescalingCertificate, labels: &[String]) -> Value {
    json!({
        "kind": c.kind.name(),
        "f": c.f.iter().map(scalar_to_json).collect::<Vec<_>>(),
        "g": c.g.iter().map(scalar_to_json).collect::<Vec<_>>(),
        "group": c.group.map(|g| g.name()),
        "residual": format_float(c.residual),
        "anchors": c.anchors.iter().map(|a| anchor_json(a, labels)).collect::<Vec<_>>(),
    })
}

fn subset_labels(subset: &[usize], labels: &[String]) -> Vec<String> {
    subset.iter().map(|&i| labels[i].clone()).collect()
}

pub fn counterexample_to_json(cx: &Counterexample, labels: &[String]) -> Value {
    match cx {
        Counterexample::ZeroPatternMismatch { row, col } => json!({
            "variant": "zeroPatternMismatch",
            "row": labels[*row],
            "col": labels[*col],
        }),
        Counterexample::InconsistentCycle { vertices, entries, ratio } => json!({
            "variant": "inconsistentCycle",
            "vertices": vertices.iter().map(|&v| node_json(v, labels)).collect::<Vec<_>>(),
            "entries": entries.iter().map(|&(r, c)| json!([labels[r], labels[c]])).collect::<Vec<_>>(),
            "ratio": scalar_to_json(ratio),
        }),
        Counterexample::DifferingMinor { subset, in_l, in_m } => json!({
            "variant": "differingMinor",
            "subset": subset_labels(subset, labels),
            "L": scalar_string(in_l),
            "M": scalar_string(in_m),
        }),
        Counterexample::DiagonalObstruction { index, reason } => json!({
            "variant": "diagonalObstruction",
            "index": labels[*index],
            "reason": reason.name(),
        }),
    }
}

/// `{"subset", "L", "M"}` for one differing minor.
pub fn minor_pair_line(subset: &[usize], in_l: &Scalar, in_m: &Scalar, labels: &[String]) -> Value {
    json!({ "subset": subset_labels(subset, labels), "L": scalar_string(in_l), "M": scalar_string(in_m) })
}

/// Report for minors that agree up to `max_card`.
pub fn equal_minors_report(max_card: usize) -> Value {
    json!({ "equal": true, "maxCard": max_card })
}

/// `{"subset", "value"}` for one minor.
pub fn minor_value_line(subset: &[usize], value: &Scalar, labels: &[String]) -> Value {
    json!({ "subset": subset_labels(subset, labels), "value": scalar_string(value) })
}

/// `{"subset", "volume"}` for one face.
pub fn volume_line(subset: &[usize], volume: f64, labels: &[String]) -> Value {
    json!({ "subset": subset_labels(subset, labels), "volume": format_float(volume) })
}

pub fn witness_to_json(w: &IsometryWitness) -> Value {
    let t: Vec<Vec<String>> = (0..w.t.nrows()).map(|i| (0..w.t.ncols()).map(|j| format_float(w.t[(i, j)])).collect()).collect();
    json!({ "T": t, "signs": w.signs, "residual": format_float(w.residual) })
}

pub fn face_counterexample_to_json(cx: &FaceCounterexample, labels: &[String]) -> Value {
    match cx {
        FaceCounterexample::FaceVolumeMismatch { subset, volume_v, volume_w } => json!({
            "variant": "faceVolumeMismatch",
            "subset": subset_labels(subset, labels),
            "V": format_float(*volume_v),
            "W": format_float(*volume_w),
        }),
        FaceCounterexample::Signs(cx) => counterexample_to_json(cx, labels),
    }
}

pub fn scaled_to_json(v: &ScaledVerdict, labels: &[String]) -> Value {
    match v {
        ScaledVerdict::Accepted { g, witness } => json!({
            "g": g.iter().map(|&x| format_float(x)).collect::<Vec<_>>(),
            "witness": witness_to_json(witness),
        }),
        ScaledVerdict::Rejected(cx) => face_counterexample_to_json(cx, labels),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{ln, Sign};

    #[test]
    fn matrix_roundtrip_exact_and_float() {
        let l = ln(4, Sign::Minus).unwrap();
        let back = matrix_from_json(&parse_json(&to_line(&matrix_to_json(&l))).unwrap()).unwrap();
        assert_eq!(back, l);
        let f = BiFunction::unlabeled(vec![
            vec![Scalar::from_f64(0.1), Scalar::from_complex(num_complex::Complex64::new(1.0 / 3.0, -2.5))],
            vec![Scalar::from_f64(-0.0), Scalar::from_f64(1e300)],
        ])
        .unwrap();
        let back = matrix_from_json(&matrix_to_json(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn reads_numbers_and_decimal_strings() {
        let v = parse_json(r#"{"labels":["a","b"],"entries":[[["1/2","0"],3],[["0.25","-1"],[0.5,0]]]}"#).unwrap();
        let l = matrix_from_json(&v).unwrap();
        assert!(!l.is_exact());
        let v = parse_json(r#"{"entries":[[["1/2","0"],3],[["0.25","-1"],["7","0"]]]}"#).unwrap();
        let l = matrix_from_json(&v).unwrap();
        assert!(l.is_exact());
        assert_eq!(l.get(1, 0), &Scalar::parse_parts("1/4", "-1").unwrap());
        assert_eq!(l.labels(), ["1", "2"]);
        assert!(matrix_from_json(&parse_json(r#"{"entries":[[1,2]]}"#).unwrap()).is_err());
        assert!(matrix_from_json(&parse_json(r#"{"entries":[[["x","0"]]]}"#).unwrap()).is_err());
    }

    #[test]
    fn scalar_strings_roundtrip() {
        for z in [
            Scalar::from_i64(54),
            Scalar::parse_parts("-3/7", "2").unwrap(),
            Scalar::parse_parts("1", "-1/2").unwrap(),
            Scalar::from_complex(num_complex::Complex64::new(1.5e-12, -3e7)),
            Scalar::from_f64(-2.0),
        ] {
            assert_eq!(parse_scalar_string(&scalar_string(&z)).unwrap(), z);
        }
    }

    #[test]
    fn vectors_roundtrip() {
        let v = VectorSet::unlabeled(2, vec![vec![0.1, -2.0], vec![1e-300, 3.0]]).unwrap();
        assert_eq!(vectors_from_json(&vectors_to_json(&v)).unwrap(), v);
        assert!(vectors_from_json(&parse_json(r#"{"dimension":3,"columns":[[1,2]]}"#).unwrap()).is_err());
    }
}
