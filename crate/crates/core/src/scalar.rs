//! Scalar abstraction shared by the float and exact-rational code paths.
//!
//! Lattice arithmetic and everything polyhedral is written once against
//! [`Scalar`]. Curved norms (ℓp for 1 < p < ∞, hulls of disks) only exist in
//! floating point and report [`crate::Error::NotExact`] when asked for an
//! exact value.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational used by the exact mode.
pub type Rational = BigRational;

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// `true` when arithmetic is exact and tolerances are zero.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;

    /// Default equality tolerance: `1e-9` in float mode, `0` in exact mode.
    fn tol() -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    /// `|a - b| <= tol`.
    fn approx_eq(&self, other: &Self, tol: &Self) -> bool {
        (self.clone() - other.clone()).abs() <= *tol
    }
}

macro_rules! impl_float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(q: &Rational) -> Self {
                num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN) as $t
            }

            fn from_f64(v: f64) -> Self {
                v as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn tol() -> Self {
                $tol
            }
        }
    };
}

impl_float_scalar!(f64, 1e-9);
impl_float_scalar!(f32, 1e-5);

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    /// Exact binary expansion of `v`. Non-finite input maps to zero.
    fn from_f64(v: f64) -> Self {
        <Rational as num_traits::FromPrimitive>::from_f64(v).unwrap_or_else(Rational::zero)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn tol() -> Self {
        Rational::zero()
    }
}

/// Parses `"p/q"`, `"n"` or a decimal literal such as `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str_radix(n.trim(), 10).ok()?;
        let d = BigInt::from_str_radix(d.trim(), 10).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str_radix(s, 10) {
        return Some(Rational::from_integer(n));
    }
    // decimal: split mantissa/exponent manually so "0.1" stays 1/10
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str_radix(&digits, 10).ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(q)
}

/// Formats `v` with `digits` significant digits, `%g`-style.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if exp < -5 || exp >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, v);
        let (m, e) = s.split_once('e').unwrap();
        let m = trim_zeros(m);
        format!("{m}e{e}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_literals() {
        assert_eq!(parse_rational("2/3").unwrap(), Rational::new(2.into(), 3.into()));
        assert_eq!(parse_rational("-3/4").unwrap(), Rational::new((-3).into(), 4.into()));
        assert_eq!(parse_rational("0.1").unwrap(), Rational::new(1.into(), 10.into()));
        assert_eq!(parse_rational("5").unwrap(), Rational::from_integer(5.into()));
        assert_eq!(parse_rational("1.5e-1").unwrap(), Rational::new(3.into(), 20.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(1.25, 12), "1.25");
        assert_eq!(fmt_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(fmt_sig(2.0_f64.sqrt() / 4.0, 12), "0.353553390593");
        assert_eq!(fmt_sig(1e-9, 12), "1e-9");
        assert_eq!(fmt_sig(-0.05, 12), "-0.05");
    }
}
