use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use super::PolyError;

/// Scalar field a polynomial's coefficients live in.
pub trait Coeff:
    Num + Signed + FromPrimitive + Clone + PartialOrd + Debug + Send + Sync + 'static
{
    /// `true` for exact arithmetic, where zero tests are decisive.
    const EXACT: bool;

    fn to_f64_lossy(&self) -> f64;

    /// Zero test relative to `scale`. Exact types ignore the scale.
    fn is_negligible(&self, scale: f64) -> bool;

    /// Equality up to an absolute tolerance (exact types ignore it).
    fn near(&self, other: &Self, tol: f64) -> bool;

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

/// Relative threshold below which a binary64 value is treated as zero.
pub(crate) const FLOAT_ZERO_REL: f64 = 8.0 * f64::EPSILON;

impl Coeff for f64 {
    const EXACT: bool = false;

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_ZERO_REL * scale
    }

    fn near(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
}

impl Coeff for BigRational {
    const EXACT: bool = true;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

/// Exact rational value of a finite binary64.
pub(crate) fn rational_from_f64(x: f64) -> Result<BigRational, PolyError> {
    BigRational::from_float(x).ok_or_else(|| PolyError::BadCoefficient(x.to_string()))
}

/// Parse `"num/den"`, an integer, or a finite decimal such as `"-0.25"`
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, PolyError> {
    let bad = || PolyError::BadCoefficient(text.to_string());
    let s = text.trim().replace('\u{2212}', "-");
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(BigRational::from_integer(n));
    }
    // decimal with optional exponent
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (
            &s[..pos],
            s[pos + 1..].parse::<i32>().map_err(|_| bad())?,
        ),
        None => (s.as_str(), 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(all);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), q(-3, 4));
        assert_eq!(parse_rational("12").unwrap(), q(12, 1));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("1.5e2").unwrap(), q(150, 1));
        assert_eq!(parse_rational("\u{2212}2").unwrap(), q(-2, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn float_to_rational_is_exact() {
        let r = rational_from_f64(0.1).unwrap();
        assert_eq!(r.to_f64().unwrap(), 0.1);
        assert_ne!(r, q(1, 10));
        assert!(rational_from_f64(f64::NAN).is_err());
    }
}
