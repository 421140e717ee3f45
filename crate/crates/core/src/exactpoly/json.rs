//! JSON encoding of fields, scalars and polynomials.
//!
//! A polynomial is `{"vars": [...], "terms": [{"e": [...], "c": ...}]}` with an
//! optional `"field"` tag (absent means the rationals). Rational coefficients
//! are strings `"num/den"`, finite-field coefficients are residue arrays
//! (one entry for F_p, k entries for F_{p^k}), complex ones `{"re", "im"}`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::field::{ExtField, Field};
use super::poly::MultiPoly;
use super::scalar::Scalar;
use super::PolyError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldJson {
    Q,
    Fp { p: u64 },
    Fpk { p: u64, modulus: Vec<u64> },
    C,
}

impl From<&Field> for FieldJson {
    fn from(f: &Field) -> Self {
        match f {
            Field::Rational => FieldJson::Q,
            Field::Prime(p) => FieldJson::Fp { p: *p },
            Field::Extension(e) => FieldJson::Fpk { p: e.characteristic(), modulus: e.modulus().to_vec() },
            Field::Complex => FieldJson::C,
        }
    }
}

impl TryFrom<&FieldJson> for Field {
    type Error = PolyError;
    fn try_from(f: &FieldJson) -> Result<Self, PolyError> {
        Ok(match f {
            FieldJson::Q => Field::Rational,
            FieldJson::Fp { p } => Field::prime(*p)?,
            FieldJson::Fpk { p, modulus } => {
                let k = modulus.len().saturating_sub(1);
                let least = ExtField::least(*p, k)?;
                if least.modulus() == modulus.as_slice() {
                    Field::Extension(least)
                } else {
                    Field::Extension(Arc::new(ExtField::new(*p, modulus.clone())?))
                }
            }
            FieldJson::C => Field::Complex,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Ratio(String),
    Residues(Vec<u64>),
    Complex { re: f64, im: f64 },
}

impl From<&Scalar> for ScalarJson {
    fn from(s: &Scalar) -> Self {
        match s {
            Scalar::Rational(r) => ScalarJson::Ratio(format!("{}/{}", r.numer(), r.denom())),
            Scalar::Prime { v, .. } => ScalarJson::Residues(vec![*v]),
            Scalar::Ext { c, .. } => ScalarJson::Residues(c.clone()),
            Scalar::Complex(z) => ScalarJson::Complex { re: z.re, im: z.im },
        }
    }
}

impl ScalarJson {
    pub fn to_scalar(&self, field: &Field) -> Result<Scalar, PolyError> {
        match (self, field) {
            (ScalarJson::Ratio(s), Field::Rational) => parse_ratio(s).map(Scalar::Rational),
            (ScalarJson::Residues(r), Field::Prime(p)) if r.len() == 1 && r[0] < *p => {
                Ok(Scalar::Prime { p: *p, v: r[0] })
            }
            (ScalarJson::Residues(r), Field::Extension(e))
                if r.len() == e.degree() && r.iter().all(|&x| x < e.characteristic()) =>
            {
                Ok(Scalar::Ext { field: e.clone(), c: r.clone() })
            }
            (ScalarJson::Complex { re, im }, Field::Complex) => Ok(Scalar::Complex(Complex64::new(*re, *im))),
            _ => Err(PolyError::Parse(format!("coefficient {self:?} does not belong to {field}"))),
        }
    }
}

fn parse_ratio(s: &str) -> Result<BigRational, PolyError> {
    let bad = || PolyError::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: Vec<u32>,
    pub c: ScalarJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldJson>,
    pub terms: Vec<TermJson>,
}

impl From<&MultiPoly> for PolyJson {
    fn from(p: &MultiPoly) -> Self {
        let field = match p.field() {
            Field::Rational => None,
            f => Some(FieldJson::from(f)),
        };
        PolyJson {
            vars: p.vars().to_vec(),
            field,
            terms: p.terms().iter().map(|t| TermJson { e: t.exp.clone(), c: (&t.coeff).into() }).collect(),
        }
    }
}

impl TryFrom<PolyJson> for MultiPoly {
    type Error = PolyError;
    fn try_from(j: PolyJson) -> Result<Self, PolyError> {
        let field = match &j.field {
            None => Field::Rational,
            Some(f) => Field::try_from(f)?,
        };
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((t.e.clone(), t.c.to_scalar(&field)?)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        MultiPoly::from_terms(j.vars.into(), field, terms)
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        MultiPoly::try_from(j).map_err(serde::de::Error::custom)
    }
}
