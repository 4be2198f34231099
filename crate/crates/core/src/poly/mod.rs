//! Sparse multivariate polynomials, their restriction to lines, and
//! univariate real-root isolation.
//!
//! Every polynomial carries a numeric mode: exact rationals
//! ([`BigRational`]) or binary64. Arithmetic is generic over [`Coeff`] so
//! the same code serves both modes; the mode only changes how zero tests
//! and root clustering are decided.

mod coeff;
mod expr;
mod json;
mod roots;
mod sparse;
mod uni;

pub use coeff::{parse_rational, Coeff};
pub use expr::{parse_expression, VariableNames};
pub use json::{CoeffDoc, PolyDoc, UniPolyDoc};
pub use roots::{
    isolate_real_roots_exact, isolate_real_roots_f64, FloatIsolation, RootInterval, RootOptions,
    DEFAULT_EPS_CLUSTER, DEFAULT_EPS_ROOT,
};
pub use sparse::{Degree, Exponents, MultiPoly, SparsePoly};
pub use uni::UniPoly;

pub use num_rational::BigRational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("direction vector is not of unit norm (squared norm {norm_sq})")]
    NotUnitDirection { norm_sq: f64 },
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("empty or reversed interval [{lo}, {hi}]")]
    BadInterval { lo: f64, hi: f64 },
    #[error("invalid coefficient {0:?}")]
    BadCoefficient(String),
    #[error("exponent vector has length {got}, polynomial has {expected} variables")]
    BadExponents { expected: usize, got: usize },
    #[error("cannot parse polynomial expression at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}
