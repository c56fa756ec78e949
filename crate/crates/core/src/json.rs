//! JSON encoding of polynomials and operators.
//!
//! Terms are emitted in canonical order and rationals as `"p/q"` strings, so
//! equal values always serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Exp, Poly};
use crate::rational::Rational;
use crate::space::VarSpace;
use crate::weyl::WeylOp;

pub const SCHEMA: &str = "symtrace/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub coeff: String,
    pub exp: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub space: VarSpace,
    pub terms: Vec<PolyTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylTerm {
    pub dexp: Vec<u32>,
    pub coeff: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylJson {
    pub space: VarSpace,
    pub terms: Vec<WeylTerm>,
}

impl From<&Poly> for PolyJson {
    fn from(p: &Poly) -> Self {
        PolyJson {
            space: p.space(),
            terms: p
                .terms()
                .map(|(e, c)| PolyTerm {
                    coeff: c.to_fraction_string(),
                    exp: e.0.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for Poly {
    type Error = Error;

    fn try_from(j: &PolyJson) -> Result<Poly> {
        let n = j.space.nvars();
        let mut p = Poly::zero(j.space);
        for t in &j.terms {
            if t.exp.len() != n {
                return Err(Error::Parse(format!(
                    "exponent {:?} has wrong length for {}",
                    t.exp, j.space
                )));
            }
            let c: Rational = t.coeff.parse()?;
            p.add_term(Exp(t.exp.clone()), c);
        }
        Ok(p)
    }
}

impl From<&WeylOp> for WeylJson {
    fn from(op: &WeylOp) -> Self {
        WeylJson {
            space: op.space(),
            terms: op
                .terms()
                .map(|(b, a)| WeylTerm {
                    dexp: b.0.clone(),
                    coeff: a.into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&WeylJson> for WeylOp {
    type Error = Error;

    fn try_from(j: &WeylJson) -> Result<WeylOp> {
        if !j.space.is_coordinate_space() {
            return Err(Error::Parse(format!("operator space {} is not x or sigma", j.space)));
        }
        let k = j.space.k();
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.dexp.len() != k {
                return Err(Error::Parse(format!(
                    "dexp {:?} has wrong length for {}",
                    t.dexp, j.space
                )));
            }
            let c = Poly::try_from(&t.coeff)?;
            terms.push((Exp(t.dexp.clone()), c));
        }
        WeylOp::from_terms(j.space, terms)
    }
}

/// Payload of a versioned document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    Poly { poly: PolyJson },
    Weyl { op: WeylJson },
}

/// Top-level file format: `{"schema": "symtrace/1", "name": .., "kind": .., ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub payload: Payload,
}

impl Document {
    pub fn poly(name: Option<&str>, p: &Poly) -> Self {
        Document {
            schema: SCHEMA.into(),
            name: name.map(str::to_owned),
            payload: Payload::Poly { poly: p.into() },
        }
    }

    pub fn weyl(name: Option<&str>, op: &WeylOp) -> Self {
        Document {
            schema: SCHEMA.into(),
            name: name.map(str::to_owned),
            payload: Payload::Weyl { op: op.into() },
        }
    }
}

pub fn poly_to_value(p: &Poly) -> serde_json::Value {
    serde_json::to_value(PolyJson::from(p)).expect("serializable")
}

pub fn weyl_to_value(op: &WeylOp) -> serde_json::Value {
    serde_json::to_value(WeylJson::from(op)).expect("serializable")
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn from_value<T: for<'de> Deserialize<'de>>(v: serde_json::Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
}

fn check_schema(v: &serde_json::Value) -> Result<()> {
    match v.get("schema").and_then(|s| s.as_str()) {
        Some(SCHEMA) => Ok(()),
        Some(other) => Err(Error::Parse(format!("unsupported schema {other:?}"))),
        None => Err(Error::Parse("missing schema field".into())),
    }
}

/// Parse an operator from either a versioned document or a bare `WeylJson`.
pub fn parse_weyl(text: &str) -> Result<WeylOp> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if v.get("kind").is_some() {
        check_schema(&v)?;
        match from_value::<Document>(v)?.payload {
            Payload::Weyl { op } => WeylOp::try_from(&op),
            Payload::Poly { .. } => Err(Error::Parse("expected an operator document, found a polynomial".into())),
        }
    } else {
        WeylOp::try_from(&from_value::<WeylJson>(v)?)
    }
}

/// Parse a polynomial from either a versioned document or a bare `PolyJson`.
pub fn parse_poly(text: &str) -> Result<Poly> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if v.get("kind").is_some() {
        check_schema(&v)?;
        match from_value::<Document>(v)?.payload {
            Payload::Poly { poly } => Poly::try_from(&poly),
            Payload::Weyl { .. } => Err(Error::Parse("expected a polynomial document, found an operator".into())),
        }
    } else {
        Poly::try_from(&from_value::<PolyJson>(v)?)
    }
}
