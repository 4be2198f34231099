//! Semi-algebraic sets in disjunctive normal form, their diagrams, Pfaffian
//! formats, parametric curves and polynomial maps.

mod count;
mod json;

pub use count::{CountOptions, FiberCount};
pub use json::{parse_set, AtomDoc, CurveDoc, MapDoc, PolyInput, SetDoc};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{MultiPoly, PolyError, SparsePoly, UniPoly};

pub const DEFAULT_EPS_SIGN: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SetError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid document: {0}")]
    Schema(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("line counting needs a one-dimensional fiber, got dimension {0}")]
    FiberNotALine(usize),
    #[error("line counting needs declared dimension m - 1 = {expected}, set declares {declared:?}")]
    WrongDeclaredDim {
        expected: usize,
        declared: Option<usize>,
    },
}

/// `p > 0` or `p = 0`; `p < 0` is stored as `-p > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    poly: MultiPoly,
    relation: Relation,
    float: SparsePoly<f64>,
}

impl Atom {
    pub fn new(poly: MultiPoly, relation: Relation) -> Self {
        let float = poly.to_f64();
        Atom {
            poly,
            relation,
            float,
        }
    }

    pub fn eq(poly: MultiPoly) -> Self {
        Self::new(poly, Relation::Eq)
    }

    pub fn gt(poly: MultiPoly) -> Self {
        Self::new(poly, Relation::Gt)
    }

    /// `p < 0`, normalized to `-p > 0`.
    pub fn lt(poly: MultiPoly) -> Self {
        Self::new(poly.neg(), Relation::Gt)
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub(crate) fn float_poly(&self) -> &SparsePoly<f64> {
        &self.float
    }

    /// Sign condition at a binary64 value of the polynomial.
    fn judge(&self, value: f64, eps_sign: f64) -> Membership {
        match self.relation {
            Relation::Eq if value.abs() <= eps_sign => Membership::Inside,
            Relation::Eq => Membership::Outside,
            Relation::Gt if value > eps_sign => Membership::Inside,
            Relation::Gt if value < -eps_sign => Membership::Outside,
            Relation::Gt => Membership::BoundaryAmbiguous,
        }
    }
}

/// Three-valued membership under a sign tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Inside,
    Outside,
    /// A strict atom is within the sign tolerance of zero.
    BoundaryAmbiguous,
}

/// Conjunction: Outside beats Ambiguous beats Inside.
fn conjoin(a: Membership, b: Membership) -> Membership {
    use Membership::*;
    match (a, b) {
        (Outside, _) | (_, Outside) => Outside,
        (BoundaryAmbiguous, _) | (_, BoundaryAmbiguous) => BoundaryAmbiguous,
        _ => Inside,
    }
}

/// Disjunction: Inside beats Ambiguous beats Outside.
fn disjoin(a: Membership, b: Membership) -> Membership {
    use Membership::*;
    match (a, b) {
        (Inside, _) | (_, Inside) => Inside,
        (BoundaryAmbiguous, _) | (_, BoundaryAmbiguous) => BoundaryAmbiguous,
        _ => Outside,
    }
}

/// `A = ∪_i ∩_j {p_ij ⋆ 0}` with `⋆ ∈ {>, =}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiAlgebraicSet {
    ambient_dim: usize,
    disjuncts: Vec<Vec<Atom>>,
    declared_dim: Option<usize>,
}

impl SemiAlgebraicSet {
    pub fn new(
        ambient_dim: usize,
        disjuncts: Vec<Vec<Atom>>,
        declared_dim: Option<usize>,
    ) -> Result<Self, SetError> {
        if disjuncts.is_empty() {
            return Err(SetError::Schema("a set needs at least one disjunct".into()));
        }
        for atom in disjuncts.iter().flatten() {
            if atom.poly.num_vars() != ambient_dim {
                return Err(SetError::DimensionMismatch {
                    expected: ambient_dim,
                    got: atom.poly.num_vars(),
                });
            }
        }
        if let Some(k) = declared_dim {
            if k > ambient_dim {
                return Err(SetError::Schema(format!(
                    "declared dimension {k} exceeds ambient dimension {ambient_dim}"
                )));
            }
        }
        Ok(SemiAlgebraicSet {
            ambient_dim,
            disjuncts,
            declared_dim,
        })
    }

    /// Zero set of a single polynomial, declared a hypersurface.
    pub fn hypersurface(poly: MultiPoly) -> Result<Self, SetError> {
        let m = poly.num_vars();
        Self::new(m, vec![vec![Atom::eq(poly)]], m.checked_sub(1))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn declared_dim(&self) -> Option<usize> {
        self.declared_dim
    }

    pub fn with_declared_dim(mut self, k: Option<usize>) -> Self {
        self.declared_dim = k;
        self
    }

    pub fn disjuncts(&self) -> &[Vec<Atom>] {
        &self.disjuncts
    }

    /// `A ∪ B`; the declared dimension is kept only when both agree.
    pub fn union(&self, other: &SemiAlgebraicSet) -> Result<Self, SetError> {
        let mut disjuncts = self.disjuncts.clone();
        disjuncts.extend(other.disjuncts.iter().cloned());
        let dim = (self.declared_dim == other.declared_dim)
            .then_some(self.declared_dim)
            .flatten();
        Self::new(self.ambient_dim, disjuncts, dim)
    }

    /// Image under `x -> factor·x`.
    pub fn dilate(&self, factor: f64) -> Result<Self, SetError> {
        let disjuncts = self
            .disjuncts
            .iter()
            .map(|d| {
                d.iter()
                    .map(|a| Ok(Atom::new(a.poly.dilate(factor)?, a.relation)))
                    .collect::<Result<Vec<_>, PolyError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(self.ambient_dim, disjuncts, self.declared_dim)
    }

    fn check_point(&self, got: usize) -> Result<(), SetError> {
        if got == self.ambient_dim {
            Ok(())
        } else {
            Err(SetError::DimensionMismatch {
                expected: self.ambient_dim,
                got,
            })
        }
    }

    /// Membership in binary64. Equality atoms hold when `|p(x)| ≤ eps_sign`;
    /// strict atoms within `eps_sign` of zero are boundary-ambiguous.
    pub fn contains(&self, x: &[f64], eps_sign: f64) -> Result<Membership, SetError> {
        self.check_point(x.len())?;
        let mut verdict = Membership::Outside;
        for disjunct in &self.disjuncts {
            let mut d = Membership::Inside;
            for atom in disjunct {
                d = conjoin(d, atom.judge(atom.float.eval(x)?, eps_sign));
                if d == Membership::Outside {
                    break;
                }
            }
            verdict = disjoin(verdict, d);
            if verdict == Membership::Inside {
                break;
            }
        }
        Ok(verdict)
    }

    /// Exact membership at a rational point.
    pub fn contains_exact(&self, x: &[BigRational]) -> Result<bool, SetError> {
        self.check_point(x.len())?;
        for disjunct in &self.disjuncts {
            let mut all = true;
            for atom in disjunct {
                let v = atom.poly.eval_exact(x)?;
                let ok = match atom.relation {
                    Relation::Eq => v.is_zero(),
                    Relation::Gt => v.is_positive(),
                };
                if !ok {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn diagram(&self) -> Diagram {
        diagram_of(self)
    }
}

/// Combinatorial data `(m, p, s_1..s_p, d_ij)` of a DNF presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub m: usize,
    pub p: usize,
    pub s: Vec<usize>,
    /// `degrees[i][j]` is the total degree of atom `j` in disjunct `i`
    /// (zero polynomials count as degree 0).
    pub degrees: Vec<Vec<u32>>,
}

impl Diagram {
    pub fn new(m: usize, degrees: Vec<Vec<u32>>) -> Result<Self, SetError> {
        if degrees.is_empty() {
            return Err(SetError::Schema("a diagram needs at least one disjunct".into()));
        }
        Ok(Diagram {
            m,
            p: degrees.len(),
            s: degrees.iter().map(Vec::len).collect(),
            degrees,
        })
    }

    /// `d_i = max_j d_ij`.
    pub fn max_degrees(&self) -> Vec<u32> {
        self.degrees
            .iter()
            .map(|row| row.iter().copied().max().unwrap_or(0))
            .collect()
    }
}

pub fn diagram_of(set: &SemiAlgebraicSet) -> Diagram {
    let degrees: Vec<Vec<u32>> = set
        .disjuncts
        .iter()
        .map(|d| d.iter().map(|a| a.poly.total_degree().or_zero()).collect())
        .collect();
    Diagram {
        m: set.ambient_dim,
        p: degrees.len(),
        s: degrees.iter().map(Vec::len).collect(),
        degrees,
    }
}

/// Format `(m, l, α, β, s)` of a semi-Pfaffian set plus the complexity `γ`
/// of its domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfaffianFormat {
    pub m: u32,
    pub l: u32,
    pub alpha: u32,
    pub beta: u32,
    pub s: u32,
    pub gamma: u32,
}

impl PfaffianFormat {
    pub fn new(m: u32, l: u32, alpha: u32, beta: u32, s: u32, gamma: u32) -> Result<Self, SetError> {
        if alpha < 1 {
            return Err(SetError::Schema("Pfaffian chain degree alpha must be at least 1".into()));
        }
        Ok(PfaffianFormat {
            m,
            l,
            alpha,
            beta,
            s,
            gamma,
        })
    }
}

/// Curve `t -> (γ_1(t), ..., γ_m(t))` on `[0, 1]`. Injectivity is the
/// caller's responsibility.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricCurve {
    coords: Vec<UniPoly<f64>>,
}

impl ParametricCurve {
    pub fn new(coords: Vec<UniPoly<f64>>) -> Result<Self, SetError> {
        if coords.is_empty() {
            return Err(SetError::Schema("a curve needs at least one coordinate".into()));
        }
        Ok(ParametricCurve { coords })
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[UniPoly<f64>] {
        &self.coords
    }

    pub fn is_constant(&self) -> bool {
        self.coords.iter().all(|c| c.degree().unwrap_or(0) == 0)
    }

    pub fn point(&self, t: f64) -> Vec<f64> {
        self.coords.iter().map(|c| c.eval(&t)).collect()
    }

    pub fn velocity(&self) -> Vec<UniPoly<f64>> {
        self.coords.iter().map(UniPoly::derivative).collect()
    }

    /// `⟨u, γ(t)⟩ - y`.
    pub fn height_poly(&self, u: &[f64], y: f64) -> Result<UniPoly<f64>, SetError> {
        if u.len() != self.coords.len() {
            return Err(SetError::DimensionMismatch {
                expected: self.coords.len(),
                got: u.len(),
            });
        }
        let mut g = UniPoly::constant(-y);
        for (c, &ui) in self.coords.iter().zip(u) {
            g = &g + &c.scale(&ui);
        }
        Ok(g)
    }

    /// Magnitude scale for zero tests on `⟨u, γ⟩ - y`.
    pub(crate) fn height_scale(&self, u: &[f64], y: f64) -> f64 {
        self.coords
            .iter()
            .zip(u)
            .map(|(c, ui)| ui.abs() * c.magnitude())
            .sum::<f64>()
            + y.abs()
    }
}

/// `f = (f_1, ..., f_n): R^m -> R^n` with polynomial components.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialMap {
    num_vars: usize,
    components: Vec<MultiPoly>,
}

impl PolynomialMap {
    pub fn new(num_vars: usize, components: Vec<MultiPoly>) -> Result<Self, SetError> {
        if components.is_empty() {
            return Err(SetError::Schema("a map needs at least one component".into()));
        }
        if let Some(bad) = components.iter().find(|c| c.num_vars() != num_vars) {
            return Err(SetError::DimensionMismatch {
                expected: num_vars,
                got: bad.num_vars(),
            });
        }
        Ok(PolynomialMap {
            num_vars,
            components,
        })
    }

    /// The single-component map `x -> Σ a_i x^{α_i}` on `R^m`.
    pub fn fewnomial(
        num_vars: usize,
        monomials: &[(Vec<u32>, BigRational)],
    ) -> Result<Self, SetError> {
        let p = SparsePoly::from_terms(num_vars, monomials.iter().cloned())?;
        Self::new(num_vars, vec![MultiPoly::Exact(p)])
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, SetError> {
        self.components
            .iter()
            .map(|c| c.eval_f64(x).map_err(SetError::from))
            .collect()
    }
}

/// The open positive orthant `{x_1 > 0, ..., x_m > 0}`, declared full
/// dimensional.
pub fn positive_orthant(m: usize) -> SemiAlgebraicSet {
    let atoms = (0..m)
        .map(|i| Atom::gt(MultiPoly::Exact(SparsePoly::variable(m, i))))
        .collect();
    SemiAlgebraicSet {
        ambient_dim: m,
        disjuncts: vec![atoms],
        declared_dim: Some(m),
    }
}

/// `f^{-1}(y) ∩ container` as `{f_1 - y_1 = 0, ..., f_n - y_n = 0}` conjoined
/// with each disjunct of the container. The declared dimension is `m - n`
/// (the generic fiber dimension); callers assert it.
pub fn construct_fiber_set(
    f: &PolynomialMap,
    y: &[f64],
    container: Option<&SemiAlgebraicSet>,
) -> Result<SemiAlgebraicSet, SetError> {
    if y.len() != f.target_dim() {
        return Err(SetError::DimensionMismatch {
            expected: f.target_dim(),
            got: y.len(),
        });
    }
    let m = f.num_vars;
    let equations = f
        .components
        .iter()
        .zip(y)
        .map(|(c, &yi)| Ok(Atom::eq(c.sub_constant(yi)?)))
        .collect::<Result<Vec<_>, PolyError>>()?;
    let disjuncts = match container {
        None => vec![equations],
        Some(c) => {
            if c.ambient_dim != m {
                return Err(SetError::DimensionMismatch {
                    expected: m,
                    got: c.ambient_dim,
                });
            }
            c.disjuncts
                .iter()
                .map(|d| equations.iter().cloned().chain(d.iter().cloned()).collect())
                .collect()
        }
    };
    SemiAlgebraicSet::new(m, disjuncts, m.checked_sub(f.target_dim()))
}
