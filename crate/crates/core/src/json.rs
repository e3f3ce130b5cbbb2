//! The shared JSON operator format.
//!
//! A document is an object
//! `{"var": "partial" | "theta", "p": <u64>, "coeffs": [[..], ..]}`
//! where `coeffs[i][j]` is the coefficient of `X^i D^j` as a string
//! (decimal residues for prime fields, `num/den` for rationals), with
//! `p = 0` selecting the rationals. A `θ`-document may carry an extra
//! `"valuation": v`, in which case row `i` stands for `X^(i-v)` and the
//! document denotes a Laurent operator.

use crate::conversions::LaurentThetaPoly;
use crate::domain::{Field, PrimeField, Rationals};
use crate::ore::{OrePoly, Var};
use crate::{Error, Result};
use serde_json::{json, Value};

/// A parsed document: the coefficient domain and the operator form are
/// only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyOperator {
    PrimeOp(OrePoly<PrimeField>),
    PrimeLaurent(LaurentThetaPoly<PrimeField>),
    RatOp(OrePoly<Rationals>),
    RatLaurent(LaurentThetaPoly<Rationals>),
}

fn grid_to_value<F: Field>(domain: F, grid: &[Vec<F::Elem>]) -> Value {
    Value::Array(
        grid.iter()
            .map(|row| {
                Value::Array(row.iter().map(|c| Value::String(domain.elem_to_string(c))).collect())
            })
            .collect(),
    )
}

pub fn operator_to_value<F: Field>(op: &OrePoly<F>) -> Value {
    json!({
        "var": op.var().symbol(),
        "p": op.domain().characteristic(),
        "coeffs": grid_to_value(op.domain(), op.grid()),
    })
}

pub fn laurent_to_value<F: Field>(l: &LaurentThetaPoly<F>) -> Value {
    json!({
        "var": "theta",
        "p": l.domain().characteristic(),
        "valuation": l.valuation(),
        "coeffs": grid_to_value(l.domain(), l.grid()),
    })
}

pub fn operator_to_string<F: Field>(op: &OrePoly<F>) -> String {
    operator_to_value(op).to_string()
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadFormat(msg.into())
}

fn value_to_grid<F: Field>(domain: F, v: &Value) -> Result<Vec<Vec<F::Elem>>> {
    let rows = v.as_array().ok_or_else(|| bad("\"coeffs\" must be an array of arrays"))?;
    rows.iter()
        .map(|row| {
            let row = row.as_array().ok_or_else(|| bad("coefficient rows must be arrays"))?;
            row.iter()
                .map(|c| match c {
                    Value::String(s) => domain.elem_from_str(s),
                    Value::Number(n) => domain
                        .elem_from_str(&n.to_string()),
                    _ => Err(bad("coefficients must be strings or integers")),
                })
                .collect()
        })
        .collect()
}

/// Parses a document, selecting the domain from `"p"`.
pub fn parse_operator(text: &str) -> Result<AnyOperator> {
    let doc: Value = serde_json::from_str(text).map_err(|e| bad(format!("not JSON: {e}")))?;
    parse_operator_value(&doc)
}

pub fn parse_operator_value(doc: &Value) -> Result<AnyOperator> {
    let obj = doc.as_object().ok_or_else(|| bad("document must be an object"))?;
    let var = match obj.get("var").and_then(Value::as_str) {
        Some("partial") => Var::Partial,
        Some("theta") => Var::Theta,
        _ => return Err(bad("\"var\" must be \"partial\" or \"theta\"")),
    };
    let p = obj
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("\"p\" must be a nonnegative integer"))?;
    let coeffs = obj.get("coeffs").ok_or_else(|| bad("missing \"coeffs\""))?;
    let valuation = match obj.get("valuation") {
        None => None,
        Some(v) => Some(
            v.as_u64().ok_or_else(|| bad("\"valuation\" must be a nonnegative integer"))? as usize,
        ),
    };
    if valuation.is_some() && var != Var::Theta {
        return Err(bad("\"valuation\" only applies to theta operators"));
    }
    if p == 0 {
        let q = Rationals;
        let grid = value_to_grid(q, coeffs)?;
        Ok(match valuation {
            Some(v) => AnyOperator::RatLaurent(LaurentThetaPoly::new(q, v, grid)),
            None => AnyOperator::RatOp(OrePoly::new(var, q, grid)),
        })
    } else {
        let f = PrimeField::new(p)?;
        let grid = value_to_grid(f, coeffs)?;
        Ok(match valuation {
            Some(v) => AnyOperator::PrimeLaurent(LaurentThetaPoly::new(f, v, grid)),
            None => AnyOperator::PrimeOp(OrePoly::new(var, f, grid)),
        })
    }
}
