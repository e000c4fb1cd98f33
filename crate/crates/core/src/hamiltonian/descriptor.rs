//! JSON model descriptors.
//!
//! ```text
//! {
//!   "n": 4,
//!   "boundary": "obc" | "pbc",
//!   "parameter": "delta",
//!   "diag":  [entry, ...],
//!   "upper": [entry, ...],
//!   "lower": [entry, ...],
//!   "corner": {"h_1n": entry, "h_n1": entry}
//! }
//! entry  := scalar | [scalar, scalar] | {"poly": [coeff, ...]}
//!         | {"poly": [coeff, ...], "den": [coeff, ...]}   (corners only)
//! coeff  := scalar | [scalar, scalar]
//! scalar := integer | "p/q" | "1.25" | float
//! ```
//!
//! Integers and strings are exact. A JSON number with a fraction or
//! exponent makes the whole model numeric, which is only possible when no
//! entry depends on the parameter.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use super::{Band, BoundaryMode, ChainModel, Corner, Entries};
use crate::error::{Error, Result};
use crate::numerics::{format_rational, parse_rational, rational_to_f64, GaussianRational, ParamPoly, RatFn};

const KEYS: [&str; 7] = ["n", "boundary", "parameter", "diag", "upper", "lower", "corner"];

enum Scalar {
    Exact(BigRational),
    Float(f64),
}

enum Coeff {
    Exact(GaussianRational),
    Float(Complex64),
}

enum Raw {
    Exact(RatFn),
    Float(Complex64),
}

fn scalar(v: &Value, path: &str) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::Exact(BigRational::from_integer(i.into())))
            } else if let Some(u) = n.as_u64() {
                Ok(Scalar::Exact(BigRational::from_integer(u.into())))
            } else {
                let f = n.as_f64().ok_or_else(|| Error::parse(path, "number out of range"))?;
                Ok(Scalar::Float(f))
            }
        }
        Value::String(s) => parse_rational(s)
            .map(Scalar::Exact)
            .ok_or_else(|| Error::parse(path, format!("cannot read {s:?} as a rational"))),
        _ => Err(Error::parse(path, "expected a number or a rational string")),
    }
}

fn coeff(v: &Value, path: &str) -> Result<Coeff> {
    let (re, im) = match v {
        Value::Array(pair) => {
            if pair.len() != 2 {
                return Err(Error::parse(path, "complex value must be [re, im]"));
            }
            (
                scalar(&pair[0], &format!("{path}[0]"))?,
                scalar(&pair[1], &format!("{path}[1]"))?,
            )
        }
        other => (scalar(other, path)?, Scalar::Exact(BigRational::zero())),
    };
    Ok(match (re, im) {
        (Scalar::Exact(re), Scalar::Exact(im)) => Coeff::Exact(GaussianRational::new(re, im)),
        (re, im) => {
            let f = |s: Scalar| match s {
                Scalar::Exact(q) => rational_to_f64(&q),
                Scalar::Float(x) => x,
            };
            Coeff::Float(Complex64::new(f(re), f(im)))
        }
    })
}

fn coeff_list(v: &Value, path: &str) -> Result<Vec<Coeff>> {
    let list = v
        .as_array()
        .ok_or_else(|| Error::parse(path, "expected a coefficient list"))?;
    list.iter()
        .enumerate()
        .map(|(k, c)| coeff(c, &format!("{path}[{k}]")))
        .collect()
}

fn poly_from(coeffs: Vec<Coeff>, path: &str) -> Result<Raw> {
    if coeffs.iter().all(|c| matches!(c, Coeff::Exact(_))) {
        let exact = coeffs
            .into_iter()
            .map(|c| match c {
                Coeff::Exact(g) => g,
                Coeff::Float(_) => unreachable!(),
            })
            .collect();
        return Ok(Raw::Exact(RatFn::poly(ParamPoly::new(exact))));
    }
    let mut value = Complex64::new(0.0, 0.0);
    for (k, c) in coeffs.into_iter().enumerate() {
        let z = match c {
            Coeff::Exact(g) => g.to_c64(),
            Coeff::Float(z) => z,
        };
        if k == 0 {
            value = z;
        } else if z != Complex64::new(0.0, 0.0) {
            return Err(Error::parse(
                path,
                "floating-point coefficients cannot be mixed with parameter dependence",
            ));
        }
    }
    Ok(Raw::Float(value))
}

fn entry(v: &Value, path: &str, allow_den: bool) -> Result<Raw> {
    match v {
        Value::Object(obj) => {
            for key in obj.keys() {
                if key != "poly" && !(allow_den && key == "den") {
                    return Err(Error::parse(format!("{path}.{key}"), "unknown key"));
                }
            }
            let num_path = format!("{path}.poly");
            let num = obj.get("poly").ok_or_else(|| Error::parse(path, "missing \"poly\""))?;
            let num = poly_from(coeff_list(num, &num_path)?, &num_path)?;
            let Some(den) = obj.get("den") else {
                return Ok(num);
            };
            let den_path = format!("{path}.den");
            let den = match poly_from(coeff_list(den, &den_path)?, &den_path)? {
                Raw::Exact(d) => d,
                Raw::Float(_) => {
                    return Err(Error::parse(den_path, "denominator must be exact"));
                }
            };
            let Raw::Exact(num) = num else {
                return Err(Error::parse(num_path, "numerator over a denominator must be exact"));
            };
            if den.is_zero() {
                return Err(Error::parse(den_path, "zero denominator"));
            }
            Ok(Raw::Exact(num.div(&den)))
        }
        other => Ok(match coeff(other, path)? {
            Coeff::Exact(g) => Raw::Exact(RatFn::constant(g)),
            Coeff::Float(z) => Raw::Float(z),
        }),
    }
}

fn entry_list(obj: &Map<String, Value>, key: &str, len: usize) -> Result<Vec<Raw>> {
    let path = format!("$.{key}");
    let list = obj
        .get(key)
        .ok_or_else(|| Error::parse("$", format!("missing \"{key}\"")))?
        .as_array()
        .ok_or_else(|| Error::parse(&path, "expected a list"))?;
    if list.len() != len {
        return Err(Error::parse(
            &path,
            format!("expected {len} entries, got {}", list.len()),
        ));
    }
    list.iter()
        .enumerate()
        .map(|(j, v)| entry(v, &format!("{path}[{j}]"), false))
        .collect()
}

/// Parse and validate a descriptor document.
pub fn load_model(text: &str) -> Result<ChainModel> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::parse("$", format!("invalid JSON: {e}")))?;
    model_from_value(&value)
}

pub fn model_from_value(value: &Value) -> Result<ChainModel> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse("$", "descriptor must be an object"))?;
    for key in obj.keys() {
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::parse(format!("$.{key}"), "unknown key"));
        }
    }
    let n = obj
        .get("n")
        .ok_or_else(|| Error::parse("$", "missing \"n\""))?
        .as_u64()
        .ok_or_else(|| Error::parse("$.n", "expected a positive integer"))?;
    if n == 0 || n > 1 << 20 {
        return Err(Error::parse("$.n", "expected a positive integer"));
    }
    let n = n as usize;
    let boundary = match obj.get("boundary").and_then(Value::as_str) {
        Some("obc") => BoundaryMode::Obc,
        Some("pbc") => BoundaryMode::Pbc,
        Some(other) => {
            return Err(Error::parse(
                "$.boundary",
                format!("expected \"obc\" or \"pbc\", got {other:?}"),
            ))
        }
        None => return Err(Error::parse("$.boundary", "expected \"obc\" or \"pbc\"")),
    };
    let parameter = match obj.get("parameter") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) if is_identifier(s) => Some(s.clone()),
        Some(_) => return Err(Error::parse("$.parameter", "expected an identifier")),
    };
    let diag = entry_list(obj, "diag", n)?;
    let upper = entry_list(obj, "upper", n - 1)?;
    let lower = entry_list(obj, "lower", n - 1)?;
    let corner = match obj.get("corner") {
        None | Some(Value::Null) => None,
        Some(Value::Object(c)) => {
            for key in c.keys() {
                if key != "h_1n" && key != "h_n1" {
                    return Err(Error::parse(format!("$.corner.{key}"), "unknown key"));
                }
            }
            let get = |key: &str| -> Result<Raw> {
                let path = format!("$.corner.{key}");
                let v = c
                    .get(key)
                    .ok_or_else(|| Error::parse("$.corner", format!("missing \"{key}\"")))?;
                entry(v, &path, true)
            };
            Some(Corner {
                h_1n: get("h_1n")?,
                h_n1: get("h_n1")?,
            })
        }
        Some(_) => return Err(Error::parse("$.corner", "expected an object")),
    };
    let band = Band {
        diag,
        upper,
        lower,
        corner,
    };
    let numeric = band.all().any(|e| matches!(e, Raw::Float(_)));
    if numeric {
        let mut bad = None;
        let band = band.map(|e| match e {
            Raw::Float(z) => *z,
            Raw::Exact(r) => {
                if !r.is_constant() && bad.is_none() {
                    bad = Some(());
                }
                r.eval_rational(&BigRational::zero())
                    .map(|g| g.to_c64())
                    .unwrap_or(Complex64::new(f64::NAN, 0.0))
            }
        });
        if bad.is_some() {
            return Err(Error::parse(
                "$",
                "floating-point entries cannot be mixed with parameter dependence",
            ));
        }
        ChainModel::numeric(boundary, band)
    } else {
        let band = band.map(|e| match e {
            Raw::Exact(r) => r.clone(),
            Raw::Float(_) => unreachable!(),
        });
        ChainModel::exact(boundary, parameter, band)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn rational_value(q: &BigRational) -> Value {
    if q.is_integer() {
        if let Some(i) = q.to_integer().to_i64() {
            return Value::from(i);
        }
    }
    Value::String(format_rational(q))
}

fn gaussian_value(g: &GaussianRational) -> Value {
    if g.is_real() {
        rational_value(&g.re)
    } else {
        Value::Array(vec![rational_value(&g.re), rational_value(&g.im)])
    }
}

fn float_value(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn complex_value(z: &Complex64) -> Value {
    // always emitted as floats so the document reloads as numeric
    if z.im == 0.0 {
        float_value(z.re)
    } else {
        Value::Array(vec![float_value(z.re), float_value(z.im)])
    }
}

fn poly_value(p: &ParamPoly) -> Value {
    Value::Array(p.coeffs().iter().map(gaussian_value).collect())
}

fn ratfn_value(r: &RatFn) -> Value {
    if r.is_poly() {
        match r.num.degree() {
            None => Value::from(0),
            Some(0) => gaussian_value(&r.num.coeff(0)),
            Some(_) => {
                let mut m = Map::new();
                m.insert("poly".into(), poly_value(&r.num));
                Value::Object(m)
            }
        }
    } else {
        let mut m = Map::new();
        m.insert("poly".into(), poly_value(&r.num));
        m.insert("den".into(), poly_value(&r.den));
        Value::Object(m)
    }
}

fn band_value<T>(obj: &mut Map<String, Value>, band: &Band<T>, f: impl Fn(&T) -> Value) {
    obj.insert("diag".into(), Value::Array(band.diag.iter().map(&f).collect()));
    obj.insert("upper".into(), Value::Array(band.upper.iter().map(&f).collect()));
    obj.insert("lower".into(), Value::Array(band.lower.iter().map(&f).collect()));
    if let Some(c) = &band.corner {
        let mut m = Map::new();
        m.insert("h_1n".into(), f(&c.h_1n));
        m.insert("h_n1".into(), f(&c.h_n1));
        obj.insert("corner".into(), Value::Object(m));
    }
}

/// Descriptor for a model. Keys come out sorted, so serializing the value
/// is canonical.
pub fn to_descriptor(model: &ChainModel) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), Value::from(model.n() as u64));
    obj.insert("boundary".into(), Value::String(model.boundary().to_string()));
    if let Some(p) = model.parameter() {
        obj.insert("parameter".into(), Value::String(p.to_string()));
    }
    match model.entries() {
        Entries::Exact(b) => band_value(&mut obj, b, ratfn_value),
        Entries::Numeric(b) => band_value(&mut obj, b, complex_value),
    }
    Value::Object(obj)
}

/// Canonical text form: sorted keys, two-space indentation, trailing newline.
pub fn to_canonical_json(model: &ChainModel) -> String {
    let mut s = serde_json::to_string_pretty(&to_descriptor(model)).expect("serializable");
    s.push('\n');
    s
}

/// SHA-256 of the compact canonical descriptor, as lowercase hex.
pub fn content_hash(model: &ChainModel) -> String {
    let compact = serde_json::to_string(&to_descriptor(model)).expect("serializable");
    let digest = Sha256::digest(compact.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
