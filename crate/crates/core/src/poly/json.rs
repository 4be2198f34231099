//! JSON documents for polynomials.
//!
//! `{"vars": m, "terms": [{"e": [e1, ..., em], "c": "num/den" | number}]}`.
//! Strings and JSON integers are exact; any non-integer JSON number puts the
//! whole polynomial in binary64 mode.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::coeff::rational_from_f64;
use super::{parse_expression, parse_rational, MultiPoly, PolyError, SparsePoly, UniPoly, VariableNames};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffDoc {
    Text(String),
    Number(serde_json::Number),
}

impl CoeffDoc {
    fn is_float(&self) -> bool {
        matches!(self, CoeffDoc::Number(n) if !(n.is_i64() || n.is_u64()))
    }

    fn to_exact(&self) -> Result<BigRational, PolyError> {
        match self {
            CoeffDoc::Text(s) => parse_rational(s),
            CoeffDoc::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(BigRational::from_integer(i.into()))
                } else if let Some(u) = n.as_u64() {
                    Ok(BigRational::from_integer(u.into()))
                } else {
                    let x = n
                        .as_f64()
                        .ok_or_else(|| PolyError::BadCoefficient(n.to_string()))?;
                    rational_from_f64(x)
                }
            }
        }
    }

    fn to_f64(&self) -> Result<f64, PolyError> {
        match self {
            CoeffDoc::Number(n) => n
                .as_f64()
                .ok_or_else(|| PolyError::BadCoefficient(n.to_string())),
            CoeffDoc::Text(_) => Ok(self.to_exact()?.to_f64().unwrap_or(f64::NAN)),
        }
    }

    fn from_exact(c: &BigRational) -> Self {
        if c.is_integer() {
            CoeffDoc::Text(c.numer().to_string())
        } else {
            CoeffDoc::Text(format!("{}/{}", c.numer(), c.denom()))
        }
    }

    fn from_f64(c: f64) -> Self {
        match serde_json::Number::from_f64(c) {
            Some(n) => CoeffDoc::Number(n),
            None => CoeffDoc::Text(c.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub e: Vec<u32>,
    pub c: CoeffDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub vars: usize,
    pub terms: Vec<TermDoc>,
}

impl TryFrom<&PolyDoc> for MultiPoly {
    type Error = PolyError;

    fn try_from(doc: &PolyDoc) -> Result<Self, PolyError> {
        let float = doc.terms.iter().any(|t| t.c.is_float());
        if float {
            let terms = doc
                .terms
                .iter()
                .map(|t| Ok((t.e.clone(), t.c.to_f64()?)))
                .collect::<Result<Vec<_>, PolyError>>()?;
            Ok(MultiPoly::Float(SparsePoly::from_terms(doc.vars, terms)?))
        } else {
            let terms = doc
                .terms
                .iter()
                .map(|t| Ok((t.e.clone(), t.c.to_exact()?)))
                .collect::<Result<Vec<_>, PolyError>>()?;
            Ok(MultiPoly::Exact(SparsePoly::from_terms(doc.vars, terms)?))
        }
    }
}

impl From<&MultiPoly> for PolyDoc {
    fn from(p: &MultiPoly) -> Self {
        let terms = match p {
            MultiPoly::Exact(s) => s
                .terms()
                .map(|(e, c)| TermDoc {
                    e: e.clone(),
                    c: CoeffDoc::from_exact(c),
                })
                .collect(),
            MultiPoly::Float(s) => s
                .terms()
                .map(|(e, c)| TermDoc {
                    e: e.clone(),
                    c: CoeffDoc::from_f64(*c),
                })
                .collect(),
        };
        PolyDoc {
            vars: p.num_vars(),
            terms,
        }
    }
}

/// A univariate polynomial in the parameter `t`: a low-to-high coefficient
/// list, or an expression string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UniPolyDoc {
    Coeffs(Vec<CoeffDoc>),
    Expr(String),
}

impl UniPolyDoc {
    pub fn to_exact(&self) -> Result<UniPoly<BigRational>, PolyError> {
        match self {
            UniPolyDoc::Coeffs(cs) => Ok(UniPoly::new(
                cs.iter().map(CoeffDoc::to_exact).collect::<Result<_, _>>()?,
            )),
            UniPolyDoc::Expr(s) => {
                let p = parse_expression(s, &VariableNames::univariate())?;
                let deg = p.total_degree().or_zero() as usize;
                let mut coeffs = vec![BigRational::from_integer(0.into()); deg + 1];
                for (e, c) in p.terms() {
                    coeffs[e[0] as usize] = c.clone();
                }
                Ok(UniPoly::new(coeffs))
            }
        }
    }

    pub fn to_f64(&self) -> Result<UniPoly<f64>, PolyError> {
        match self {
            UniPolyDoc::Coeffs(cs) => Ok(UniPoly::new(
                cs.iter().map(CoeffDoc::to_f64).collect::<Result<_, _>>()?,
            )),
            UniPolyDoc::Expr(_) => Ok(self.to_exact()?.to_f64()),
        }
    }

    pub fn from_f64(p: &UniPoly<f64>) -> Self {
        UniPolyDoc::Coeffs(p.coeffs().iter().map(|&c| CoeffDoc::from_f64(c)).collect())
    }
}
