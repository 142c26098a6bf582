//! JSON encoding of field descriptors and field elements.
//!
//! Rationals travel as `"p/q"` strings; plain JSON integers are accepted on
//! input. Errors name the offending key path.

use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::elem::FieldElem;
use super::field::FieldDescriptor;
use super::poly::Poly;
use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

pub fn rational_from_json(v: &Value, key: &str) -> Result<Rational> {
    match v {
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| Error::malformed(key, format!("invalid rational `{s}`")))
        }
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string())
            .ok_or_else(|| Error::malformed(key, "invalid integer")),
        _ => Err(Error::malformed(key, "expected a rational string \"p/q\"")),
    }
}

pub fn rational_list_from_json(v: &Value, key: &str) -> Result<Vec<Rational>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::malformed(key, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| rational_from_json(x, &format!("{key}[{i}]")))
        .collect()
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn get<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::malformed(join(path, key), "missing key"))
}

pub(crate) fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Parses a field descriptor document, or the `{"quadratic_d": m}` shorthand.
pub fn descriptor_from_json(v: &Value, path: &str) -> Result<Arc<FieldDescriptor>> {
    if !v.is_object() {
        return Err(Error::malformed(path, "expected an object"));
    }
    if let Some(m) = v.get("quadratic_d") {
        let key = join(path, "quadratic_d");
        let r = rational_from_json(m, &key)?;
        if !r.is_integer() {
            return Err(Error::malformed(key, "must be an integer"));
        }
        return FieldDescriptor::quadratic(&r.to_integer());
    }
    if v.get("rational").and_then(Value::as_bool) == Some(true) {
        return Ok(FieldDescriptor::rationals());
    }
    let mp_key = join(path, "min_poly");
    let min_poly = Poly::new(rational_list_from_json(get(v, "min_poly", path)?, &mp_key)?);
    let aut_key = join(path, "automorphisms");
    let auts = get(v, "automorphisms", path)?
        .as_array()
        .ok_or_else(|| Error::malformed(&aut_key, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, a)| rational_list_from_json(a, &format!("{aut_key}[{i}]")).map(Poly::new))
        .collect::<Result<Vec<_>>>()?;
    let emb_key = join(path, "embeddings");
    let embs = get(v, "embeddings", path)?
        .as_array()
        .ok_or_else(|| Error::malformed(&emb_key, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let k = format!("{emb_key}[{i}]");
            let pair = rational_list_from_json(e, &k)?;
            match <[Rational; 2]>::try_from(pair) {
                Ok([lo, hi]) => Ok((lo, hi)),
                Err(_) => Err(Error::malformed(k, "expected [lo, hi]")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let primary = match v.get("primary_embedding") {
        None => embs.len().saturating_sub(1),
        Some(p) => p
            .as_u64()
            .ok_or_else(|| Error::malformed(join(path, "primary_embedding"), "expected an index"))?
            as usize,
    };
    FieldDescriptor::new(min_poly, auts, embs, primary)
}

pub fn descriptor_to_json(f: &FieldDescriptor) -> Value {
    let list = |p: &Poly| {
        let mut c: Vec<Rational> = p.coeffs().to_vec();
        if c.is_empty() {
            c.push(Rational::from_integer(BigInt::from(0)));
        }
        Value::Array(c.iter().map(rational_to_json).collect())
    };
    json!({
        "min_poly": list(f.min_poly()),
        "automorphisms": f.automorphisms().iter().map(list).collect::<Vec<_>>(),
        "embeddings": f.embeddings().iter()
            .map(|(lo, hi)| json!([rational_to_json(lo), rational_to_json(hi)]))
            .collect::<Vec<_>>(),
        "primary_embedding": f.primary_embedding(),
    })
}

/// A field element as a coefficient list over the generator. A bare rational
/// is accepted as an element of Q ⊂ E.
pub fn elem_from_json(v: &Value, field: &Arc<FieldDescriptor>, key: &str) -> Result<FieldElem> {
    let coeffs = match v {
        Value::Array(_) => rational_list_from_json(v, key)?,
        _ => vec![rational_from_json(v, key)?],
    };
    if coeffs.len() > field.degree() {
        return Err(Error::malformed(
            key,
            format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                field.degree()
            ),
        ));
    }
    Ok(FieldElem::new(field, coeffs))
}

pub fn elem_to_json(x: &FieldElem) -> Value {
    Value::Array(x.coeffs().iter().map(rational_to_json).collect())
}
