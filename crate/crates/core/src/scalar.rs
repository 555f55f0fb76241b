//! Probability scalars.
//!
//! Every table, pmf and checker in this crate is generic over [`Probability`].
//! The exact instantiation is [`BigRational`](num_rational::BigRational), which
//! turns every theorem check into an equality test. `f64`/`f32` are supported
//! for quick numeric work; their comparisons use a relative tolerance.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, NumAssignRef, One, Signed, ToPrimitive, Zero};

use crate::error::ParseRationalError;

/// Scalar type usable as a probability.
pub trait Probability: Num + NumAssignRef + Clone + Debug + PartialOrd + Send + Sync + 'static {
    /// Converts an exact rational into this scalar (rounding for floats).
    fn from_rational(r: &BigRational) -> Self;

    /// Exact rational value of this scalar.
    ///
    /// Binary floats convert exactly, so `from_rational(to_rational(x)) == x`.
    fn to_rational(&self) -> BigRational;

    fn to_f64(&self) -> f64;

    /// Equality up to the scalar's tolerance (exact for rationals).
    fn same(&self, other: &Self) -> bool;

    /// True when the value is indistinguishable from zero.
    fn is_negligible(&self) -> bool {
        self.same(&Self::zero())
    }

    fn is_exact() -> bool;
}

impl Probability for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_exact() -> bool {
        true
    }
}

macro_rules! float_probability {
    ($t:ty, $tol:expr) => {
        impl Probability for $t {
            fn from_rational(r: &BigRational) -> Self {
                ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as $t
            }

            fn to_rational(&self) -> BigRational {
                BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn same(&self, other: &Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                (self - other).abs() <= $tol * scale
            }

            fn is_exact() -> bool {
                false
            }
        }
    };
}

float_probability!(f64, 1e-12);
float_probability!(f32, 1e-5);

/// Parses `"3/10"`, `"1"`, `"0.25"` or `"-2"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let s = text.trim();
    let err = || ParseRationalError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int.starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| err())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = BigInt::from_str(frac).map_err(|_| err())?;
        let magnitude = BigRational::from_integer(int_part.abs()) + BigRational::new(frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| err())
}

/// Renders an exact rational as `"n/d"`, or `"n"` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats `x` with `digits` significant digits in plain decimal notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 || !x.is_finite() {
        return format!("{:.*}", digits - 1, x);
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{:.*}", decimals, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("3/10").unwrap(), q(3, 10));
        assert_eq!(parse_rational(" 6/20 ").unwrap(), q(3, 10));
        assert_eq!(parse_rational("1").unwrap(), q(1, 1));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn formats_rationals() {
        assert_eq!(format_rational(&q(63, 200)), "63/200");
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(format_rational(&q(0, 5)), "0");
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.5, 12), "0.500000000000");
        assert_eq!(format_significant(0.1, 12), "0.100000000000");
        assert_eq!(format_significant(0.315, 3), "0.315");
        assert_eq!(format_significant(12.5, 3), "12.5");
        assert_eq!(format_significant(0.0, 3), "0.00");
    }

    #[test]
    fn float_round_trip_is_exact() {
        let x = 0.1f64;
        assert_eq!(f64::from_rational(&x.to_rational()), x);
        assert!(0.3f64.same(&(0.1 + 0.2)));
        assert!(!0.3f64.same(&0.3001));
    }
}
