use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::Coeff;

/// Dense univariate polynomial, coefficients stored low to high degree.
///
/// Trailing zero coefficients are never stored, so the last entry is the
/// leading coefficient and the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `a + b·t`
    pub fn linear(a: T, b: T) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * T::from_usize(i).expect("degree fits"))
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(T::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `q(a + w·u)` as a polynomial in `u`.
    pub fn compose_affine(&self, a: &T, w: &T) -> Self {
        let inner = Self::linear(a.clone(), w.clone());
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &Self::constant(c.clone());
        }
        acc
    }

    /// Coefficients in the degree-`n` Bernstein basis on `[0, 1]`, where
    /// `n` is the stored degree.
    pub fn bernstein_coefficients(&self) -> Vec<T> {
        let Some(n) = self.degree() else {
            return Vec::new();
        };
        let binom = binomial_row(n);
        (0..=n)
            .map(|j| {
                let row_j = binomial_row(j);
                (0..=j).fold(T::zero(), |acc, i| {
                    let w = T::from_f64(row_j[i]).expect("binomial")
                        / T::from_f64(binom[i]).expect("binomial");
                    acc + w * self.coeffs[i].clone()
                })
            })
            .collect()
    }

    /// Largest coefficient magnitude, as a binary64 scale.
    pub fn magnitude(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.to_f64_lossy().abs())
            .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> UniPoly<f64> {
        UniPoly::new(self.coeffs.iter().map(Coeff::to_f64_lossy).collect())
    }

    /// Euclidean division; `None` when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead = divisor.leading()?.clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Some((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let factor = rem[i + dd].clone() / lead.clone();
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - factor.clone() * c.clone();
            }
            rem[i + dd] = T::zero();
            quot[i] = factor;
        }
        rem.truncate(dd);
        Some((Self::new(quot), Self::new(rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lead) => {
                let inv = T::one() / lead.clone();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }
}

impl UniPoly<BigRational> {
    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Square-free part `q / gcd(q, q')`, made monic.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        let (quot, _) = self.div_rem(&g).expect("gcd is nonzero");
        quot.monic()
    }
}

/// Row `n` of Pascal's triangle, in binary64 (exact up to n ≈ 50).
fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n - k + 1) as f64 / k as f64;
    }
    row
}

impl<T: Coeff> Add for &UniPoly<T> {
    type Output = UniPoly<T>;

    fn add(self, rhs: Self) -> UniPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                let b = rhs.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        UniPoly::new(coeffs)
    }
}

impl<T: Coeff> Sub for &UniPoly<T> {
    type Output = UniPoly<T>;

    fn sub(self, rhs: Self) -> UniPoly<T> {
        self + &(-rhs)
    }
}

impl<T: Coeff> Neg for &UniPoly<T> {
    type Output = UniPoly<T>;

    fn neg(self) -> UniPoly<T> {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Coeff> Mul for &UniPoly<T> {
    type Output = UniPoly<T>;

    fn mul(self, rhs: Self) -> UniPoly<T> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn exact(cs: &[i64]) -> UniPoly<BigRational> {
        UniPoly::new(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn trims_and_reports_degree() {
        let p = UniPoly::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(UniPoly::<f64>::new(vec![0.0]).degree(), None);
    }

    #[test]
    fn square_free_part_removes_repeated_factors() {
        // (t-1)^2 (t+2) = t^3 - 3t + 2
        let p = exact(&[2, -3, 0, 1]);
        let sf = p.square_free_part();
        // (t-1)(t+2) = t^2 + t - 2
        assert_eq!(sf, exact(&[-2, 1, 1]));
    }

    #[test]
    fn division_reconstructs_dividend() {
        let a = exact(&[5, 0, -3, 2, 1]);
        let b = exact(&[1, 1, 2]);
        let (quot, rem) = a.div_rem(&b).unwrap();
        assert_eq!(&(&quot * &b) + &rem, a);
        assert!(rem.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn bernstein_endpoints_match_values() {
        let p = UniPoly::new(vec![1.0, -3.0, 0.5, 2.0]);
        let b = p.bernstein_coefficients();
        assert!((b[0] - p.eval(&0.0)).abs() < 1e-15);
        assert!((b[3] - p.eval(&1.0)).abs() < 1e-15);
    }

    #[test]
    fn affine_composition() {
        let p = exact(&[0, 0, 1]);
        // (1 + 2u)^2 = 1 + 4u + 4u^2
        assert_eq!(p.compose_affine(&q(1), &q(2)), exact(&[1, 4, 4]));
    }
}
