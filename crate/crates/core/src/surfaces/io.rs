//! JSON input and output for surface models and conic bundles. Errors carry
//! the byte offset of the offending token.

use serde_json::{Map, Value};

use super::conic::ConicBundleModel;
use super::form::{fmt_exponents, parse_exponents};
use super::{Ambient, SurfaceModel};
use crate::error::{Error, Result};
use crate::gf::{field_from_order, FieldElement, FieldSpec};

/// Byte offset of a serde_json error (its line/column are 1-based).
fn json_offset(text: &str, err: &serde_json::Error) -> usize {
    let line = err.line().max(1);
    let before: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (before + err.column().saturating_sub(1)).min(text.len())
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Malformed { offset: json_offset(text, &e), message: e.to_string() })
}

/// Offset of the token reached by following `path` (object keys, or literal
/// tokens for array items) from the start of the text.
fn locate(text: &str, path: &[String]) -> usize {
    let mut pos = 0;
    for key in path {
        let needle = format!("\"{key}\"");
        match text[pos..].find(&needle).or_else(|| text[pos..].find(key.as_str())) {
            Some(i) => pos += i,
            None => break,
        }
    }
    pos
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn err(&self, path: &[String], message: impl Into<String>) -> Error {
        Error::Malformed { offset: locate(self.text, path), message: message.into() }
    }

    fn wrap<T>(&self, path: &[String], r: Result<T>) -> Result<T> {
        r.map_err(|e| self.err(path, e.to_string()))
    }
}

fn path(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Parses a coefficient: an integer (mapped into the prime field), a digit
/// list `c0,c1,...` in the field's polynomial basis, or a full `p^n:c0,...`.
pub fn parse_coefficient(f: &FieldSpec, text: &str) -> Result<u64> {
    let t = text.trim();
    if !t.contains(',') && !t.contains(':') {
        let k: i64 = t.parse().map_err(|e| Error::Parse(format!("coefficient '{text}': {e}")))?;
        return Ok(f.from_int(k));
    }
    Ok(FieldElement::parse_in(f, t)?.code())
}

fn coefficient_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn object<'a>(ctx: &Ctx, v: &'a Value, at: &[String]) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| ctx.err(at, "expected a JSON object"))
}

fn field_of(ctx: &Ctx, root: &Map<String, Value>) -> Result<FieldSpec> {
    let at = path(&["q"]);
    let q = root.get("q").and_then(coefficient_text).ok_or_else(|| ctx.err(&at, "missing field order \"q\""))?;
    ctx.wrap(&at, field_from_order(&q))
}

/// Parses the surface JSON format (see FORMATS.md).
pub fn surface_from_json(text: &str) -> Result<SurfaceModel> {
    let ctx = Ctx { text };
    let root_value = parse_value(text)?;
    let root = object(&ctx, &root_value, &[])?;
    for key in root.keys() {
        if !["ambient", "q", "forms"].contains(&key.as_str()) {
            return Err(ctx.err(&[key.clone()], format!("unknown key \"{key}\"")));
        }
    }
    let at = path(&["ambient"]);
    let ambient = root.get("ambient").and_then(Value::as_str).ok_or_else(|| ctx.err(&at, "missing \"ambient\" string"))?;
    let ambient = ctx.wrap(&at, Ambient::parse(ambient))?;
    let field = field_of(&ctx, root)?;
    let mut model = SurfaceModel::new(ambient, &field);
    let empty = Map::new();
    let forms = match root.get("forms") {
        Some(v) => object(&ctx, v, &path(&["forms"]))?,
        None => &empty,
    };
    for (name, body) in forms {
        let at = path(&["forms", name]);
        if !ambient.forms().iter().any(|(n, _)| n == name) {
            return Err(ctx.err(&at, format!("{ambient} has no form \"{name}\"")));
        }
        for (mono, coeff) in object(&ctx, body, &at)? {
            let at = path(&["forms", name, mono]);
            let e = ctx.wrap(&at, parse_exponents(mono))?;
            let c = coefficient_text(coeff).ok_or_else(|| ctx.err(&at, "coefficient must be a string or integer"))?;
            let c = ctx.wrap(&at, parse_coefficient(&field, &c))?;
            model = ctx.wrap(&at, model.with_term(name, e, c))?;
        }
    }
    Ok(model)
}

fn coefficient_out(f: &FieldSpec, c: u64) -> Value {
    if f.is_prime_field() {
        Value::String(c.to_string())
    } else {
        Value::String(f.digits(c).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Serializes a model; keys are sorted so the output is deterministic.
pub fn surface_to_json(s: &SurfaceModel) -> Value {
    let mut forms = Map::new();
    for (name, form) in &s.forms {
        if form.is_zero() {
            continue;
        }
        let terms: Map<String, Value> = form.terms.iter().map(|(e, &c)| (fmt_exponents(e), coefficient_out(&s.field, c))).collect();
        forms.insert(name.clone(), Value::Object(terms));
    }
    let mut root = Map::new();
    root.insert("ambient".into(), Value::String(s.ambient.name().into()));
    root.insert("q".into(), Value::String(s.field.to_string()));
    root.insert("forms".into(), Value::Object(forms));
    Value::Object(root)
}

/// Parses the conic bundle JSON format (see FORMATS.md).
pub fn conic_bundle_from_json(text: &str) -> Result<ConicBundleModel> {
    let ctx = Ctx { text };
    let root_value = parse_value(text)?;
    let root = object(&ctx, &root_value, &[])?;
    for key in root.keys() {
        if !["q", "weights", "matrix"].contains(&key.as_str()) {
            return Err(ctx.err(&[key.clone()], format!("unknown key \"{key}\"")));
        }
    }
    let field = field_of(&ctx, root)?;
    let at = path(&["weights"]);
    let weights: Vec<u32> = root
        .get("weights")
        .and_then(Value::as_array)
        .map(|a| a.iter().map(|w| w.as_u64().map(|w| w as u32)).collect::<Option<Vec<_>>>())
        .unwrap_or(Some(vec![0, 0, 0]))
        .filter(|w| w.len() == 3)
        .ok_or_else(|| ctx.err(&at, "\"weights\" must be three nonnegative integers"))?;
    let at = path(&["matrix"]);
    let rows = root.get("matrix").and_then(Value::as_array).filter(|r| r.len() == 3).ok_or_else(|| ctx.err(&at, "\"matrix\" must be a 3x3 array"))?;
    let mut entries = [[Vec::new(), Vec::new(), Vec::new()], [Vec::new(), Vec::new(), Vec::new()], [Vec::new(), Vec::new(), Vec::new()]];
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == 3).ok_or_else(|| ctx.err(&at, format!("row {i} must have three entries")))?;
        for (j, poly) in row.iter().enumerate() {
            let coeffs = poly.as_array().ok_or_else(|| ctx.err(&at, format!("entry ({i},{j}) must be an array of coefficients")))?;
            let mut out = Vec::with_capacity(coeffs.len());
            for c in coeffs {
                let t = coefficient_text(c).ok_or_else(|| ctx.err(&at, format!("entry ({i},{j}) has a non-scalar coefficient")))?;
                out.push(ctx.wrap(&at, parse_coefficient(&field, &t))?);
            }
            entries[i][j] = out;
        }
    }
    ctx.wrap(&at, ConicBundleModel::new(&field, entries, [weights[0], weights[1], weights[2]]))
}

pub fn conic_bundle_to_json(b: &ConicBundleModel) -> Value {
    let matrix: Vec<Value> = b
        .entries
        .iter()
        .map(|row| Value::Array(row.iter().map(|p| Value::Array(p.iter().map(|&c| coefficient_out(&b.field, c)).collect())).collect()))
        .collect();
    let mut root = Map::new();
    root.insert("q".into(), Value::String(b.field.to_string()));
    root.insert("weights".into(), Value::Array(b.weights.iter().map(|&w| Value::from(w)).collect()));
    root.insert("matrix".into(), Value::Array(matrix));
    Value::Object(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::count_points;

    const LI: &str = r#"{"ambient":"P(1,1,2,3)","q":"3^1","forms":{
        "f4":{"(4,0)":"2","(2,2)":"1","(0,4)":"2"},
        "f6":{"(6,0)":"1","(4,2)":"2","(0,6)":"1"}}}"#;

    #[test]
    fn parse_and_round_trip() {
        let s = surface_from_json(LI).unwrap();
        assert_eq!(s.ambient, Ambient::P1123);
        let again = surface_from_json(&surface_to_json(&s).to_string()).unwrap();
        assert_eq!(again, s);
        assert_eq!(count_points(&again).unwrap().count, count_points(&s).unwrap().count);
    }

    #[test]
    fn syntax_error_offset() {
        let text = "{\"ambient\": \"P(1,1,2,3)\",\n \"q\": 3,, }";
        match surface_from_json(text) {
            Err(Error::Malformed { offset, .. }) => assert_eq!(&text[offset..offset + 1], ","),
            other => panic!("expected a malformed-input error, got {other:?}"),
        }
    }

    #[test]
    fn semantic_error_offset() {
        let text = r#"{"ambient":"P(1,1,2,3)","q":"3","forms":{"f4":{"(3,0)":"1"}}}"#;
        match surface_from_json(text) {
            Err(Error::Malformed { offset, message }) => {
                assert!(text[offset..].starts_with("\"(3,0)\""), "{message}");
            }
            other => panic!("expected a malformed-input error, got {other:?}"),
        }
        let text = r#"{"ambient":"P(1,1,2,3)","q":"6"}"#;
        assert!(matches!(surface_from_json(text), Err(Error::Malformed { offset: 24, .. })));
    }

    #[test]
    fn coefficients() {
        let f = crate::gf::make_field(2, 2).unwrap();
        assert_eq!(parse_coefficient(&f, "1").unwrap(), 1);
        assert_eq!(parse_coefficient(&f, "0,1").unwrap(), 2);
        assert_eq!(parse_coefficient(&f, "2^2:1,1").unwrap(), 3);
        assert!(parse_coefficient(&f, "x").is_err());
    }
}
