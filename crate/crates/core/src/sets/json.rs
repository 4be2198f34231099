//! JSON documents for sets, curves and maps.
//!
//! ```json
//! {"m": 2, "dim": 1, "disjuncts": [[{"p": "x^2 + y^2 - 1", "rel": "="}]]}
//! {"m": 2, "coords": [[0, 1], "t^2"]}
//! {"m": 2, "n": 1, "components": ["x^2 + y^2"]}
//! ```
//!
//! A polynomial is either a `{"vars", "terms"}` document or an expression
//! string. When `m` is omitted it is inferred from the polynomials.

use serde::{Deserialize, Serialize};

use super::{Atom, ParametricCurve, PolynomialMap, Relation, SemiAlgebraicSet, SetError};
use crate::poly::{parse_expression, MultiPoly, PolyDoc, UniPolyDoc, VariableNames};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyInput {
    Doc(PolyDoc),
    Expr(String),
}

impl PolyInput {
    fn to_poly(&self, m: usize) -> Result<MultiPoly, SetError> {
        match self {
            PolyInput::Doc(doc) => {
                if doc.vars != m {
                    return Err(SetError::DimensionMismatch {
                        expected: m,
                        got: doc.vars,
                    });
                }
                Ok(MultiPoly::try_from(doc)?)
            }
            PolyInput::Expr(s) => Ok(MultiPoly::Exact(parse_expression(
                s,
                &VariableNames::for_dim(m),
            )?)),
        }
    }

    /// Dimension implied by this polynomial alone.
    fn implied_dim(&self) -> usize {
        match self {
            PolyInput::Doc(doc) => doc.vars,
            PolyInput::Expr(s) => implied_dim_of_expr(s),
        }
    }
}

/// Highest variable index named in an expression: `x, y, z` are 1, 2, 3
/// and `xN` is `N`.
fn implied_dim_of_expr(s: &str) -> usize {
    let chars: Vec<char> = s.chars().collect();
    let mut best = 1;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_alphabetic() {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[i + 1..j].iter().collect();
            let idx = match (c, digits.parse::<usize>()) {
                ('x', Ok(n)) => n,
                ('x', Err(_)) => 1,
                ('y', _) => 2,
                ('z', _) => 3,
                _ => 1,
            };
            best = best.max(idx);
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomDoc {
    pub p: PolyInput,
    pub rel: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub disjuncts: Vec<Vec<AtomDoc>>,
}

/// Build the normalized DNF of a set document; `<` atoms become `-p > 0`.
pub fn parse_set(doc: &SetDoc) -> Result<SemiAlgebraicSet, SetError> {
    let m = match doc.m {
        Some(m) => m,
        None => doc
            .disjuncts
            .iter()
            .flatten()
            .map(|a| a.p.implied_dim())
            .max()
            .ok_or_else(|| SetError::Schema("set has no atoms to infer m from".into()))?,
    };
    if m == 0 {
        return Err(SetError::Schema("ambient dimension must be positive".into()));
    }
    let disjuncts = doc
        .disjuncts
        .iter()
        .map(|conj| {
            conj.iter()
                .map(|a| {
                    let p = a.p.to_poly(m)?;
                    match a.rel.trim() {
                        "=" | "==" => Ok(Atom::eq(p)),
                        ">" => Ok(Atom::gt(p)),
                        "<" => Ok(Atom::lt(p)),
                        other => Err(SetError::Schema(format!("unknown relation {other:?}"))),
                    }
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    SemiAlgebraicSet::new(m, disjuncts, doc.dim)
}

impl SemiAlgebraicSet {
    pub fn from_json(text: &str) -> Result<Self, SetError> {
        let doc: SetDoc =
            serde_json::from_str(text).map_err(|e| SetError::Schema(e.to_string()))?;
        parse_set(&doc)
    }
}

impl From<&SemiAlgebraicSet> for SetDoc {
    fn from(set: &SemiAlgebraicSet) -> Self {
        SetDoc {
            m: Some(set.ambient_dim()),
            dim: set.declared_dim(),
            disjuncts: set
                .disjuncts()
                .iter()
                .map(|d| {
                    d.iter()
                        .map(|a| AtomDoc {
                            p: PolyInput::Doc(PolyDoc::from(a.poly())),
                            rel: match a.relation() {
                                Relation::Eq => "=".into(),
                                Relation::Gt => ">".into(),
                            },
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub coords: Vec<UniPolyDoc>,
}

impl ParametricCurve {
    pub fn from_doc(doc: &CurveDoc) -> Result<Self, SetError> {
        if let Some(m) = doc.m {
            if m != doc.coords.len() {
                return Err(SetError::DimensionMismatch {
                    expected: m,
                    got: doc.coords.len(),
                });
            }
        }
        let coords = doc
            .coords
            .iter()
            .map(|c| c.to_f64().map_err(SetError::from))
            .collect::<Result<Vec<_>, _>>()?;
        ParametricCurve::new(coords)
    }

    pub fn from_json(text: &str) -> Result<Self, SetError> {
        let doc: CurveDoc =
            serde_json::from_str(text).map_err(|e| SetError::Schema(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn to_doc(&self) -> CurveDoc {
        CurveDoc {
            m: Some(self.ambient_dim()),
            coords: self.coords().iter().map(UniPolyDoc::from_f64).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDoc {
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub components: Vec<PolyInput>,
}

impl PolynomialMap {
    pub fn from_doc(doc: &MapDoc) -> Result<Self, SetError> {
        if let Some(n) = doc.n {
            if n != doc.components.len() {
                return Err(SetError::DimensionMismatch {
                    expected: n,
                    got: doc.components.len(),
                });
            }
        }
        let components = doc
            .components
            .iter()
            .map(|c| c.to_poly(doc.m))
            .collect::<Result<Vec<_>, _>>()?;
        PolynomialMap::new(doc.m, components)
    }

    pub fn from_json(text: &str) -> Result<Self, SetError> {
        let doc: MapDoc =
            serde_json::from_str(text).map_err(|e| SetError::Schema(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_document_without_m() {
        let set =
            SemiAlgebraicSet::from_json(r#"{"disjuncts":[[{"p":"x²+y²−1","rel":"="}]]}"#).unwrap();
        assert_eq!(set.ambient_dim(), 2);
        assert_eq!(set.disjuncts().len(), 1);
        assert_eq!(set.disjuncts()[0].len(), 1);
    }

    #[test]
    fn less_than_becomes_negated_greater() {
        let set = SemiAlgebraicSet::from_json(
            r#"{"m":2,"dim":1,"disjuncts":[[{"p":"x^2+y^2-1","rel":"="},{"p":"x","rel":"<"}]]}"#,
        )
        .unwrap();
        let atom = &set.disjuncts()[0][1];
        assert_eq!(atom.relation(), Relation::Gt);
        assert_eq!(atom.poly().eval_f64(&[2.0, 0.0]).unwrap(), -2.0);
    }

    #[test]
    fn two_disjuncts_in_diagram() {
        let set = SemiAlgebraicSet::from_json(
            r#"{"m":2,"disjuncts":[[{"p":"x^2+y^2-1","rel":"="}],[{"p":"y","rel":"="},{"p":"x","rel":">"}]]}"#,
        )
        .unwrap();
        assert_eq!(set.diagram().p, 2);
    }

    #[test]
    fn structured_polynomials_and_errors() {
        let set = SemiAlgebraicSet::from_json(
            r#"{"m":2,"dim":1,"disjuncts":[[{"p":{"vars":2,"terms":[{"e":[0,1],"c":"1/2"}]},"rel":"="}]]}"#,
        )
        .unwrap();
        assert_eq!(set.declared_dim(), Some(1));
        assert!(SemiAlgebraicSet::from_json(
            r#"{"m":3,"disjuncts":[[{"p":{"vars":2,"terms":[]},"rel":"="}]]}"#
        )
        .is_err());
        assert!(SemiAlgebraicSet::from_json(r#"{"m":2,"disjuncts":[[{"p":"x","rel":">="}]]}"#).is_err());
        assert!(SemiAlgebraicSet::from_json(r#"{"m":2,"disjuncts":[]}"#).is_err());
        assert!(SemiAlgebraicSet::from_json(r#"{"m":2}"#).is_err());
    }

    #[test]
    fn set_document_round_trip() {
        let set = SemiAlgebraicSet::from_json(
            r#"{"m":2,"dim":1,"disjuncts":[[{"p":"x^2+y^2-1","rel":"="},{"p":"x","rel":"<"}]]}"#,
        )
        .unwrap();
        let text = serde_json::to_string(&SetDoc::from(&set)).unwrap();
        assert_eq!(SemiAlgebraicSet::from_json(&text).unwrap(), set);
    }

    #[test]
    fn curves_and_maps() {
        let c = ParametricCurve::from_json(r#"{"m":3,"coords":[[0,1],"t^2",[0,0,0,1]]}"#).unwrap();
        assert_eq!(c.point(0.5), vec![0.5, 0.25, 0.125]);
        assert!(ParametricCurve::from_json(r#"{"m":2,"coords":["t"]}"#).is_err());
        let f = PolynomialMap::from_json(r#"{"m":2,"n":1,"components":["x^2+y^2"]}"#).unwrap();
        assert_eq!(f.eval(&[3.0, 4.0]).unwrap(), vec![25.0]);
        assert!(PolynomialMap::from_json(r#"{"m":2,"n":2,"components":["x"]}"#).is_err());
    }

    #[test]
    fn inferred_dimensions() {
        assert_eq!(implied_dim_of_expr("x^2 + 1"), 1);
        assert_eq!(implied_dim_of_expr("x*z"), 3);
        assert_eq!(implied_dim_of_expr("x1 + x7^2"), 7);
    }
}
