//! Parsing of coefficients, region sizes and JSON equation documents.

use std::fs;
use std::io::Read;
use std::path::Path;

use la2_core::{BigEquation, BigInt};
use num_traits::{Signed, Zero};
use serde_json::{Map, Value};

use crate::CliError;

pub fn parse_int(field: &str, text: &str) -> Result<BigInt, CliError> {
    let t = text.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    t.parse::<BigInt>()
        .map_err(|_| CliError::usage(format!("{field}: `{text}` is not an integer")))
}

/// `⌊s⌋` for a plain decimal literal such as `34`, `-2`, `33.75` or `.5`.
/// Exponents are rejected; no binary floating point is involved.
pub fn floor_decimal(text: &str) -> Result<BigInt, CliError> {
    let bad = || CliError::usage(format!("x: `{text}` is not a decimal number"));
    let t = text.trim();
    let (negative, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = |s: &str| s.bytes().all(|c| c.is_ascii_digit());
    if whole.is_empty() && frac.is_empty() || !digits(whole) || !digits(frac) {
        return Err(bad());
    }
    let mut n: BigInt = if whole.is_empty() {
        BigInt::zero()
    } else {
        whole.parse().map_err(|_| bad())?
    };
    let fractional = frac.bytes().any(|c| c != b'0');
    if negative {
        n = -n;
        if fractional {
            n -= 1;
        }
    }
    Ok(n)
}

/// `A..B` (inclusive), each end floored.
pub fn parse_range(text: &str) -> Result<(BigInt, BigInt), CliError> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| CliError::usage(format!("x-range: `{text}` is not of the form A..B")))?;
    let (a, b) = (floor_decimal(a)?, floor_decimal(b)?);
    if a > b {
        return Err(CliError::usage(format!("x-range: empty range {a}..{b}")));
    }
    Ok((a, b))
}

pub fn nonnegative_x(x: BigInt) -> Result<BigInt, CliError> {
    if x.is_negative() {
        Err(CliError::usage(format!("x = {x} must be nonnegative")))
    } else {
        Ok(x)
    }
}

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

pub fn equation_from(coeffs: [BigInt; 6]) -> Result<BigEquation, CliError> {
    if !coeffs[0].is_positive() {
        return Err(CliError::usage(format!(
            "leading coefficient a = {} must be positive (multiply the equation by -1)",
            coeffs[0]
        )));
    }
    BigEquation::from_coeffs(coeffs).map_err(CliError::from)
}

fn from_strings(values: &[&str]) -> Result<BigEquation, CliError> {
    if values.len() != 6 {
        return Err(CliError::usage(format!(
            "expected 6 coefficients a b c d e f, got {}",
            values.len()
        )));
    }
    let mut out: [BigInt; 6] = Default::default();
    for (slot, (name, text)) in out.iter_mut().zip(NAMES.iter().zip(values)) {
        *slot = parse_int(name, text)?;
    }
    equation_from(out)
}

pub fn from_positional(values: &[String]) -> Result<BigEquation, CliError> {
    from_strings(&values.iter().map(String::as_str).collect::<Vec<_>>())
}

pub fn from_csv(csv: &str) -> Result<BigEquation, CliError> {
    from_strings(&csv.split(',').collect::<Vec<_>>())
}

fn json_int(name: &str, v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::String(s) => parse_int(name, s),
        Value::Number(n) => parse_int(name, &n.to_string()),
        other => Err(CliError::usage(format!(
            "{name}: expected an integer, got {other}"
        ))),
    }
}

fn coefficient_object(obj: &Map<String, Value>) -> Option<Result<BigEquation, CliError>> {
    if !NAMES.iter().all(|n| obj.contains_key(*n)) {
        return None;
    }
    let mut out: [BigInt; 6] = Default::default();
    for (slot, name) in out.iter_mut().zip(NAMES) {
        match json_int(name, &obj[name]) {
            Ok(v) => *slot = v,
            Err(e) => return Some(Err(e)),
        }
    }
    Some(equation_from(out))
}

/// Accepts `{"a": …, …, "f": …}` or any output document of this tool whose
/// `result` or `input` carries the six coefficients.
pub fn from_json(text: &str) -> Result<BigEquation, CliError> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| CliError::usage(format!("input is not valid JSON: {e}")))?;
    let Value::Object(top) = &doc else {
        return Err(CliError::usage("input JSON must be an object"));
    };
    let nested = ["result", "input"]
        .iter()
        .filter_map(|k| top.get(*k).and_then(Value::as_object));
    std::iter::once(top)
        .chain(nested)
        .find_map(coefficient_object)
        .unwrap_or_else(|| Err(CliError::usage("input JSON has no coefficients a..f")))
}

pub fn from_file(path: &Path, stdin: &mut dyn Read) -> Result<BigEquation, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| CliError::usage(format!("cannot read stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?
    };
    from_json(&text)
}
