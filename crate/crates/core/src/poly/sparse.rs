use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use super::coeff::rational_from_f64;
use super::{Coeff, PolyError, UniPoly};

pub type Exponents = Vec<u32>;

/// Total degree; the zero polynomial has degree minus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    /// Finite degree, with the zero polynomial mapped to 0.
    pub fn or_zero(self) -> u32 {
        match self {
            Degree::NegInfinity => 0,
            Degree::Finite(d) => d,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Sparse polynomial over `T` in `num_vars` variables. No stored
/// coefficient is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<T> {
    num_vars: usize,
    terms: BTreeMap<Exponents, T>,
}

impl<T: Coeff> SparsePoly<T> {
    pub fn zero(num_vars: usize) -> Self {
        SparsePoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: T) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    /// The coordinate function `x_index`.
    pub fn variable(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        let mut p = Self::zero(num_vars);
        p.add_term(e, T::one());
        p
    }

    pub fn from_terms(
        num_vars: usize,
        terms: impl IntoIterator<Item = (Exponents, T)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(PolyError::BadExponents {
                    expected: num_vars,
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Adds `c·x^e`, merging with an existing term and dropping zeros.
    pub fn add_term(&mut self, e: Exponents, c: T) {
        debug_assert_eq!(e.len(), self.num_vars);
        let merged = match self.terms.remove(&e) {
            Some(old) => old + c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(e, merged);
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    fn check_dim(&self, got: usize) -> Result<(), PolyError> {
        if got == self.num_vars {
            Ok(())
        } else {
            Err(PolyError::DimensionMismatch {
                expected: self.num_vars,
                got,
            })
        }
    }

    pub fn eval(&self, x: &[T]) -> Result<T, PolyError> {
        self.check_dim(x.len())?;
        Ok(self.terms.iter().fold(T::zero(), |acc, (e, c)| {
            let monomial = e
                .iter()
                .zip(x)
                .fold(T::one(), |m, (&k, xi)| m * num_traits::pow(xi.clone(), k as usize));
            acc + c.clone() * monomial
        }))
    }

    /// `q(t) = p(base + t·direction)`.
    pub fn restrict_to_line(&self, base: &[T], direction: &[T]) -> Result<UniPoly<T>, PolyError> {
        self.check_dim(base.len())?;
        self.check_dim(direction.len())?;
        let norm_sq = direction
            .iter()
            .fold(T::zero(), |acc, d| acc + d.clone() * d.clone());
        if norm_sq.is_zero() {
            return Err(PolyError::ZeroDirection);
        }
        if !norm_sq.near(&T::one(), 1e-12) {
            return Err(PolyError::NotUnitDirection {
                norm_sq: norm_sq.to_f64_lossy(),
            });
        }
        Ok(self.substitute_lines(base, direction))
    }

    /// Substitution without the unit-norm precondition.
    pub(crate) fn substitute_lines(&self, base: &[T], direction: &[T]) -> UniPoly<T> {
        let max_exp: Vec<u32> = (0..self.num_vars)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        // powers[i][k] = (base_i + t·dir_i)^k
        let powers: Vec<Vec<UniPoly<T>>> = (0..self.num_vars)
            .map(|i| {
                let lin = UniPoly::linear(base[i].clone(), direction[i].clone());
                let mut row = vec![UniPoly::constant(T::one())];
                for k in 1..=max_exp[i] as usize {
                    let next = &row[k - 1] * &lin;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut out = UniPoly::zero();
        for (e, c) in &self.terms {
            let mut term = UniPoly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            out = &out + &term;
        }
        out
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.num_vars, T::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone() * k.clone());
        }
        out
    }

    /// Constant value, when the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<T> {
        match self.total_degree() {
            Degree::NegInfinity => Some(T::zero()),
            Degree::Finite(0) => self.terms.values().next().cloned(),
            Degree::Finite(_) => None,
        }
    }

    /// Substitute `x_i -> x_i / factor` coordinatewise, i.e. the image of
    /// the zero set under scaling by `factor`.
    pub fn dilate(&self, factor: &T) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().sum();
            let k = num_traits::pow(factor.clone(), deg as usize);
            out.add_term(e.clone(), c.clone() / k);
        }
        out
    }

    pub fn map_coeffs<U: Coeff>(&self, f: impl Fn(&T) -> U) -> SparsePoly<U> {
        let mut out = SparsePoly::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

impl SparsePoly<f64> {
    /// Exact rational image of every binary64 coefficient.
    pub fn to_exact(&self) -> SparsePoly<BigRational> {
        self.map_coeffs(|c| rational_from_f64(*c).expect("finite coefficient"))
    }
}

/// A polynomial tagged with its numeric mode.
#[derive(Clone, Debug, PartialEq)]
pub enum MultiPoly {
    Exact(SparsePoly<BigRational>),
    Float(SparsePoly<f64>),
}

impl MultiPoly {
    pub fn num_vars(&self) -> usize {
        match self {
            MultiPoly::Exact(p) => p.num_vars(),
            MultiPoly::Float(p) => p.num_vars(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, MultiPoly::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MultiPoly::Exact(p) => p.is_zero(),
            MultiPoly::Float(p) => p.is_zero(),
        }
    }

    pub fn total_degree(&self) -> Degree {
        match self {
            MultiPoly::Exact(p) => p.total_degree(),
            MultiPoly::Float(p) => p.total_degree(),
        }
    }

    pub fn to_f64(&self) -> SparsePoly<f64> {
        match self {
            MultiPoly::Exact(p) => p.map_coeffs(Coeff::to_f64_lossy),
            MultiPoly::Float(p) => p.clone(),
        }
    }

    pub fn to_exact(&self) -> SparsePoly<BigRational> {
        match self {
            MultiPoly::Exact(p) => p.clone(),
            MultiPoly::Float(p) => p.to_exact(),
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<f64, PolyError> {
        match self {
            MultiPoly::Exact(p) => {
                p.check_dim(x.len())?;
                self.to_f64().eval(x)
            }
            MultiPoly::Float(p) => p.eval(x),
        }
    }

    /// Exact evaluation; binary64 coefficients are read as the rationals
    /// they represent.
    pub fn eval_exact(&self, x: &[BigRational]) -> Result<BigRational, PolyError> {
        match self {
            MultiPoly::Exact(p) => p.eval(x),
            MultiPoly::Float(p) => p.to_exact().eval(x),
        }
    }

    pub fn neg(&self) -> MultiPoly {
        match self {
            MultiPoly::Exact(p) => MultiPoly::Exact(p.neg()),
            MultiPoly::Float(p) => MultiPoly::Float(p.neg()),
        }
    }

    /// Sum in the common mode: exact only when both operands are exact.
    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        match (self, other) {
            (MultiPoly::Exact(a), MultiPoly::Exact(b)) => MultiPoly::Exact(a.add(b)),
            _ => MultiPoly::Float(self.to_f64().add(&other.to_f64())),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        match (self, other) {
            (MultiPoly::Exact(a), MultiPoly::Exact(b)) => MultiPoly::Exact(a.mul(b)),
            _ => MultiPoly::Float(self.to_f64().mul(&other.to_f64())),
        }
    }

    /// `p - c`, keeping exact mode (a binary64 `c` is an exact rational).
    pub fn sub_constant(&self, c: f64) -> Result<MultiPoly, PolyError> {
        let n = self.num_vars();
        Ok(match self {
            MultiPoly::Exact(p) => {
                MultiPoly::Exact(p.sub(&SparsePoly::constant(n, rational_from_f64(c)?)))
            }
            MultiPoly::Float(p) => MultiPoly::Float(p.sub(&SparsePoly::constant(n, c))),
        })
    }

    pub fn dilate(&self, factor: f64) -> Result<MultiPoly, PolyError> {
        Ok(match self {
            MultiPoly::Exact(p) => MultiPoly::Exact(p.dilate(&rational_from_f64(factor)?)),
            MultiPoly::Float(p) => MultiPoly::Float(p.dilate(&factor)),
        })
    }

    pub fn restrict_to_line_f64(
        &self,
        base: &[f64],
        direction: &[f64],
    ) -> Result<UniPoly<f64>, PolyError> {
        self.to_f64().restrict_to_line(base, direction)
    }

    pub fn restrict_to_line_exact(
        &self,
        base: &[BigRational],
        direction: &[BigRational],
    ) -> Result<UniPoly<BigRational>, PolyError> {
        self.to_exact().restrict_to_line(base, direction)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn circle() -> SparsePoly<BigRational> {
        SparsePoly::from_terms(
            2,
            [
                (vec![2, 0], q(1, 1)),
                (vec![0, 2], q(1, 1)),
                (vec![0, 0], q(-1, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let c = circle();
        assert_eq!(c.eval(&[q(0, 1), q(0, 1)]).unwrap(), q(-1, 1));
        assert_eq!(c.eval(&[q(1, 1), q(0, 1)]).unwrap(), BigRational::zero());
        let xy = SparsePoly::from_terms(2, [(vec![1, 1], 1.0)]).unwrap();
        assert_eq!(xy.eval(&[3.0, 4.0]).unwrap(), 12.0);
        assert_eq!(
            c.eval(&[q(1, 1)]),
            Err(PolyError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn degree_and_zero_terms() {
        let mut p = circle();
        assert_eq!(p.total_degree(), Degree::Finite(2));
        p.add_term(vec![2, 0], q(-1, 1));
        p.add_term(vec![0, 2], q(-1, 1));
        assert_eq!(p.num_terms(), 1);
        p.add_term(vec![0, 0], BigRational::one());
        assert!(p.is_zero());
        assert_eq!(p.total_degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
    }

    #[test]
    fn restriction_examples() {
        let c = circle();
        let along_x = c.restrict_to_line(&[q(0, 1), q(0, 1)], &[q(1, 1), q(0, 1)]).unwrap();
        let tilted = c
            .restrict_to_line(&[q(0, 1), q(0, 1)], &[q(3, 5), q(4, 5)])
            .unwrap();
        let expected = UniPoly::new(vec![q(-1, 1), q(0, 1), q(1, 1)]);
        assert_eq!(along_x, expected);
        assert_eq!(tilted, expected);

        let xy = SparsePoly::from_terms(2, [(vec![1, 1], q(1, 1))]).unwrap();
        let r = xy.restrict_to_line(&[q(1, 1), q(0, 1)], &[q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(r, UniPoly::new(vec![q(0, 1), q(1, 1)]));
    }

    #[test]
    fn restriction_rejects_bad_directions() {
        let c = circle();
        let zero = [q(0, 1), q(0, 1)];
        assert_eq!(
            c.restrict_to_line(&zero, &zero),
            Err(PolyError::ZeroDirection)
        );
        assert!(matches!(
            c.restrict_to_line(&zero, &[q(1, 1), q(1, 1)]),
            Err(PolyError::NotUnitDirection { .. })
        ));
        assert!(matches!(
            c.restrict_to_line(&zero, &[q(1, 1)]),
            Err(PolyError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dilation_scales_zero_set() {
        let big = circle().dilate(&q(2, 1));
        assert_eq!(big.eval(&[q(2, 1), q(0, 1)]).unwrap(), BigRational::zero());
    }

    #[test]
    fn mixed_mode_sum_is_float() {
        let a = MultiPoly::Exact(circle());
        let b = MultiPoly::Float(SparsePoly::constant(2, 0.5));
        assert!(!a.add(&b).is_exact());
        assert!(a.sub_constant(0.5).unwrap().is_exact());
    }
}
