//! JSON exchange formats for every type the command line reads or writes.
//!
//! Documents are tagged `"schema": "hodgelab/1"` on output; the tag is
//! optional on input. Integer entries are emitted as JSON numbers while
//! they fit in 64 bits and as decimal strings beyond that; both forms are
//! accepted on input. Functional coefficients may additionally be given as
//! fraction strings like "1/2"; denominators are cleared before use.

use crate::catalog::VarietyClass;
use crate::derham::{DeRhamVector, NamedDrFunctional};
use crate::hdr::{CombinedFunctional, HdrDecomposition, HdrElement, NamedCombined};
use crate::hodge::{
    BirationalVerdict, GenMonomial, HodgeDiamond, LinearFunctional, NamedFunctional,
    PresentationElement,
};
use crate::poly::{ctx, GradedPolynomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

pub const SCHEMA: &str = "hodgelab/1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JsonError {
    #[error("malformed input: {0}")]
    Malformed(String),
}

fn bad(msg: impl Into<String>) -> JsonError {
    JsonError::Malformed(msg.into())
}

pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt, JsonError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(bad(format!("non-integer number {n}")))
            }
        }
        Value::String(s) => s.parse().map_err(|_| bad(format!("bad integer {s:?}"))),
        other => Err(bad(format!("expected integer, found {other}"))),
    }
}

/// Integer or fraction: number, "p", or "p/q".
fn rational_from_json(v: &Value) -> Result<(BigInt, BigInt), JsonError> {
    if let Value::String(s) = v {
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad numerator {num:?}")))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad denominator {den:?}")))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            let sign = if den.is_negative() { -1 } else { 1 };
            return Ok((num * sign, den.abs()));
        }
    }
    Ok((int_from_json(v)?, BigInt::one()))
}

fn ints_to_json(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_to_json).collect())
}

fn get<'v>(v: &'v Value, field: &str) -> Result<&'v Value, JsonError> {
    v.get(field).ok_or_else(|| bad(format!("missing field {field:?}")))
}

fn get_usize(v: &Value, field: &str) -> Result<usize, JsonError> {
    get(v, field)?
        .as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| bad(format!("field {field:?} must be a non-negative integer")))
}

fn int_matrix_from_json(v: &Value, rows: usize, cols: usize) -> Result<Vec<BigInt>, JsonError> {
    let arr = v.as_array().ok_or_else(|| bad("expected a matrix"))?;
    if arr.len() != rows {
        return Err(bad(format!("expected {rows} rows, found {}", arr.len())));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for row in arr {
        let row = row.as_array().ok_or_else(|| bad("expected a matrix row"))?;
        if row.len() != cols {
            return Err(bad(format!("expected {cols} columns, found {}", row.len())));
        }
        for e in row {
            out.push(int_from_json(e)?);
        }
    }
    Ok(out)
}

pub fn diamond_to_json(d: &HodgeDiamond) -> Value {
    let n = d.dim();
    let h: Vec<Value> = (0..=n)
        .map(|i| Value::Array((0..=n).map(|j| int_to_json(d.get(i, j))).collect()))
        .collect();
    json!({"schema": SCHEMA, "type": "hodge", "n": n, "h": h})
}

pub fn diamond_from_json(v: &Value) -> Result<HodgeDiamond, JsonError> {
    let n = get_usize(v, "n")?;
    let entries = int_matrix_from_json(get(v, "h")?, n + 1, n + 1)?;
    Ok(HodgeDiamond::from_entries(n, entries))
}

pub fn derham_to_json(d: &DeRhamVector) -> Value {
    json!({"schema": SCHEMA, "type": "derham", "n": d.dim(), "h": ints_to_json(d.entries())})
}

pub fn derham_from_json(v: &Value) -> Result<DeRhamVector, JsonError> {
    let n = get_usize(v, "n")?;
    let arr = get(v, "h")?
        .as_array()
        .ok_or_else(|| bad("field \"h\" must be an array"))?;
    if arr.len() != 2 * n + 1 {
        return Err(bad(format!(
            "expected {} entries, found {}",
            2 * n + 1,
            arr.len()
        )));
    }
    let h = arr.iter().map(int_from_json).collect::<Result<_, _>>()?;
    Ok(DeRhamVector::from_entries(n, h))
}

pub fn hdr_to_json(e: &HdrElement) -> Value {
    json!({
        "schema": SCHEMA,
        "type": "hdr",
        "n": e.dim(),
        "hodge": diamond_to_json(&e.hodge),
        "derham": derham_to_json(&e.derham),
    })
}

pub fn hdr_from_json(v: &Value) -> Result<HdrElement, JsonError> {
    let hodge = diamond_from_json(get(v, "hodge")?)?;
    let derham = derham_from_json(get(v, "derham")?)?;
    HdrElement::new(hodge, derham).map_err(|e| bad(e.to_string()))
}

fn modulus_from_json(v: &Value) -> Result<Option<BigInt>, JsonError> {
    match v.get("modulus") {
        None | Some(Value::Null) => Ok(None),
        Some(m) => {
            let m = int_from_json(m)?;
            if m < BigInt::from(2) {
                return Err(bad("modulus must be at least 2"));
            }
            Ok(Some(m))
        }
    }
}

/// Clear denominators across a coefficient list; modular functionals must
/// already be integral.
fn clear_denominators(
    entries: Vec<(BigInt, BigInt)>,
    modular: bool,
) -> Result<Vec<BigInt>, JsonError> {
    let mut lcm = BigInt::one();
    for (_, den) in &entries {
        lcm = lcm.lcm(den);
    }
    if modular && !lcm.is_one() {
        return Err(bad("modular functionals must have integer coefficients"));
    }
    Ok(entries
        .into_iter()
        .map(|(num, den)| num * (&lcm / den))
        .collect())
}

pub fn functional_to_json(f: &LinearFunctional) -> Value {
    let n = f.n;
    let lambda: Vec<Value> = (0..=n)
        .map(|i| {
            Value::Array(
                (0..=n)
                    .map(|j| int_to_json(&f.lambda[i * (n + 1) + j]))
                    .collect(),
            )
        })
        .collect();
    let mut out = json!({"schema": SCHEMA, "type": "functional", "n": n, "lambda": lambda});
    if let Some(m) = &f.modulus {
        out["modulus"] = int_to_json(m);
    }
    out
}

pub fn functional_from_json(v: &Value) -> Result<LinearFunctional, JsonError> {
    let n = get_usize(v, "n")?;
    let modulus = modulus_from_json(v)?;
    let arr = get(v, "lambda")?
        .as_array()
        .ok_or_else(|| bad("field \"lambda\" must be a matrix"))?;
    if arr.len() != n + 1 {
        return Err(bad(format!("expected {} rows, found {}", n + 1, arr.len())));
    }
    let mut entries = Vec::with_capacity((n + 1) * (n + 1));
    for row in arr {
        let row = row.as_array().ok_or_else(|| bad("expected a matrix row"))?;
        if row.len() != n + 1 {
            return Err(bad(format!(
                "expected {} columns, found {}",
                n + 1,
                row.len()
            )));
        }
        for e in row {
            entries.push(rational_from_json(e)?);
        }
    }
    let lambda = clear_denominators(entries, modulus.is_some())?;
    Ok(LinearFunctional::new(n, lambda, modulus))
}

pub fn combined_to_json(f: &CombinedFunctional) -> Value {
    let n = f.n;
    let lambda: Vec<Value> = (0..=n)
        .map(|i| {
            Value::Array(
                (0..=n)
                    .map(|j| int_to_json(&f.lambda[i * (n + 1) + j]))
                    .collect(),
            )
        })
        .collect();
    let mut out = json!({
        "schema": SCHEMA,
        "type": "hdr-functional",
        "n": n,
        "lambda": lambda,
        "mu": ints_to_json(&f.mu),
    });
    if let Some(m) = &f.modulus {
        out["modulus"] = int_to_json(m);
    }
    out
}

/// Any of the element documents, dispatched on the "type" tag.
pub enum InputObject {
    Hodge(HodgeDiamond),
    DeRham(DeRhamVector),
    Hdr(HdrElement),
}

pub fn element_from_json(v: &Value) -> Result<InputObject, JsonError> {
    let tag = get(v, "type")?
        .as_str()
        .ok_or_else(|| bad("field \"type\" must be a string"))?;
    match tag {
        "hodge" => Ok(InputObject::Hodge(diamond_from_json(v)?)),
        "derham" => Ok(InputObject::DeRham(derham_from_json(v)?)),
        "hdr" => Ok(InputObject::Hdr(hdr_from_json(v)?)),
        other => Err(bad(format!("unknown type {other:?}"))),
    }
}

fn monomial_coeffs_to_json(coeffs: &[(GenMonomial, BigInt)]) -> Value {
    Value::Array(
        coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| json!({"monomial": m.to_string(), "coef": int_to_json(c)}))
            .collect(),
    )
}

fn monomial_coeffs_pretty(coeffs: &[(GenMonomial, BigInt)]) -> String {
    let poly = GradedPolynomial::from_terms(
        &ctx::generators(),
        coeffs
            .iter()
            .map(|(m, c)| (m.exponents(), c.clone())),
    );
    poly.to_string()
}

pub fn presentation_to_json(e: &PresentationElement, n: usize) -> Value {
    json!({
        "schema": SCHEMA,
        "type": "decomposition",
        "space": "hodge",
        "n": n,
        "p0": e.p0().to_term_list(),
        "p1": e.p1().to_term_list(),
        "pretty": e.to_string(),
    })
}

pub fn derham_decomposition_to_json(coeffs: &[(GenMonomial, BigInt)], n: usize) -> Value {
    json!({
        "schema": SCHEMA,
        "type": "decomposition",
        "space": "derham",
        "n": n,
        "coefficients": monomial_coeffs_to_json(coeffs),
        "pretty": monomial_coeffs_pretty(coeffs),
    })
}

pub fn hdr_decomposition_to_json(d: &HdrDecomposition, n: usize) -> Value {
    json!({
        "schema": SCHEMA,
        "type": "decomposition",
        "space": "hdr",
        "n": n,
        "presentation": {
            "p0": d.presentation.p0().to_term_list(),
            "p1": d.presentation.p1().to_term_list(),
            "pretty": d.presentation.to_string(),
        },
        "ideal": {
            "g2": monomial_coeffs_to_json(&d.ideal_g2),
            "g3": monomial_coeffs_to_json(&d.ideal_g3),
        },
        "pretty": hdr_decomposition_pretty(d),
    })
}

pub fn hdr_decomposition_pretty(d: &HdrDecomposition) -> String {
    let mut parts = Vec::new();
    if !d.presentation.is_zero() {
        parts.push(d.presentation.to_string());
    }
    for (label, coeffs) in [("g2", &d.ideal_g2), ("g3", &d.ideal_g3)] {
        if coeffs.iter().any(|(_, c)| !c.is_zero()) {
            parts.push(format!("{label}*({})", monomial_coeffs_pretty(coeffs)));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Human form of a diamond functional: "h[0,0] - h[1,1]".
pub fn functional_pretty(f: &LinearFunctional) -> String {
    let n = f.n;
    let mut s = String::new();
    for i in 0..=n {
        for j in 0..=n {
            append_term(&mut s, &f.lambda[i * (n + 1) + j], &format!("h[{i},{j}]"));
        }
    }
    finish_pretty(s, &f.modulus)
}

pub fn dr_functional_pretty(f: &NamedDrFunctional) -> String {
    let mut s = String::new();
    for (i, c) in f.mu.iter().enumerate() {
        append_term(&mut s, c, &format!("hdR[{i}]"));
    }
    finish_pretty(s, &f.modulus)
}

pub fn combined_pretty(f: &CombinedFunctional) -> String {
    let n = f.n;
    let mut s = String::new();
    for i in 0..=n {
        for j in 0..=n {
            append_term(&mut s, &f.lambda[i * (n + 1) + j], &format!("h[{i},{j}]"));
        }
    }
    for (i, c) in f.mu.iter().enumerate() {
        append_term(&mut s, c, &format!("hdR[{i}]"));
    }
    finish_pretty(s, &f.modulus)
}

fn append_term(s: &mut String, c: &BigInt, name: &str) {
    if c.is_zero() {
        return;
    }
    if s.is_empty() {
        if c.is_negative() {
            s.push('-');
        }
    } else {
        s.push_str(if c.is_negative() { " - " } else { " + " });
    }
    let mag = c.abs();
    if !mag.is_one() {
        s.push_str(&mag.to_string());
    }
    s.push_str(name);
}

fn finish_pretty(s: String, modulus: &Option<BigInt>) -> String {
    let body = if s.is_empty() { "0".to_string() } else { s };
    match modulus {
        Some(m) => format!("{body} = 0 (mod {m})"),
        None => format!("{body} = 0"),
    }
}

pub fn named_functionals_to_json(
    space: &str,
    n: usize,
    modulus: Option<&BigInt>,
    items: Vec<(String, Value, String)>,
) -> Value {
    let mut out = json!({
        "schema": SCHEMA,
        "type": "relations",
        "space": space,
        "n": n,
        "relations": items
            .into_iter()
            .map(|(name, functional, pretty)| json!({
                "name": name,
                "functional": functional,
                "pretty": pretty,
            }))
            .collect::<Vec<Value>>(),
    });
    if let Some(m) = modulus {
        out["modulus"] = int_to_json(m);
    }
    out
}

pub fn hodge_relations_to_json(items: &[NamedFunctional], n: usize) -> Value {
    let modulus = items.first().and_then(|f| f.functional.modulus.clone());
    named_functionals_to_json(
        "hodge",
        n,
        modulus.as_ref(),
        items
            .iter()
            .map(|f| {
                (
                    f.name.clone(),
                    functional_to_json(&f.functional),
                    functional_pretty(&f.functional),
                )
            })
            .collect(),
    )
}

pub fn derham_relations_to_json(items: &[NamedDrFunctional], n: usize) -> Value {
    let modulus = items.first().and_then(|f| f.modulus.clone());
    named_functionals_to_json(
        "derham",
        n,
        modulus.as_ref(),
        items
            .iter()
            .map(|f| {
                let mut doc = json!({
                    "schema": SCHEMA,
                    "type": "derham-functional",
                    "n": n,
                    "mu": ints_to_json(&f.mu),
                });
                if let Some(m) = &f.modulus {
                    doc["modulus"] = int_to_json(m);
                }
                (f.name.clone(), doc, dr_functional_pretty(f))
            })
            .collect(),
    )
}

pub fn hdr_relations_to_json(items: &[NamedCombined], n: usize) -> Value {
    let modulus = items.first().and_then(|f| f.functional.modulus.clone());
    named_functionals_to_json(
        "hdr",
        n,
        modulus.as_ref(),
        items
            .iter()
            .map(|f| {
                (
                    f.name.clone(),
                    combined_to_json(&f.functional),
                    combined_pretty(&f.functional),
                )
            })
            .collect(),
    )
}

pub fn birational_to_json(f: &LinearFunctional, verdict: &BirationalVerdict) -> Value {
    match verdict {
        BirationalVerdict::Invariant { outer } => {
            let combination: Vec<Value> = outer
                .iter()
                .map(|((i, j), c)| json!({"i": i, "j": j, "coef": int_to_json(c)}))
                .collect();
            json!({
                "schema": SCHEMA,
                "type": "birational",
                "n": f.n,
                "verdict": "invariant",
                "outer": combination,
            })
        }
        BirationalVerdict::Violates {
            class,
            value,
            basis_index,
        } => {
            json!({
                "schema": SCHEMA,
                "type": "birational",
                "n": f.n,
                "verdict": "not-invariant",
                "witness": {
                    "class": diamond_to_json(class),
                    "value": int_to_json(value),
                    "realization": witness_realization(f.n, *basis_index),
                },
            })
        }
    }
}

/// Name the violating ideal class in terms of varieties: the generator of
/// the ideal is the difference of a point blow-up of the plane and the
/// plane itself.
pub fn witness_realization(n: usize, basis_index: usize) -> String {
    if n == 2 {
        "h(Bl_pt P^2) - h(P^2)".to_string()
    } else {
        format!("(h(Bl_pt P^2) - h(P^2)) * basis[{basis_index}] of degree {}", n - 2)
    }
}

pub fn catalog_entry_to_json(e: &VarietyClass) -> Value {
    let mut out = json!({
        "schema": SCHEMA,
        "type": "variety-class",
        "name": e.name,
        "dim": e.dim,
        "virtual": e.is_virtual,
        "partial": e.is_partial(),
        "notes": e.notes,
    });
    if let Some(h) = &e.hodge {
        out["hodge"] = diamond_to_json(h);
    }
    if let Some(d) = &e.derham {
        out["derham"] = derham_to_json(d);
    }
    if !e.known.is_empty() {
        out["known"] = Value::Array(
            e.known
                .iter()
                .map(|(label, value)| json!({"label": label, "value": value}))
                .collect(),
        );
    }
    out
}
