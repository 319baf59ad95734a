//! Scalar types shared by every backend.
//!
//! Two arithmetic modes exist: exact rationals (topology, identities) and
//! `f64` (solvers). Code that runs in both modes is generic over [`Scalar`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Exact arbitrary-precision rational number.
pub type Rational = BigRational;

/// Field element usable by the generic algorithms.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
    /// `true` when the value is zero in exact mode or below round-off in float mode.
    fn is_negligible(&self) -> bool;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer representable")
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact square root if one exists in this scalar type.
    fn sqrt_exact(&self) -> Option<Self>;

    /// Nearest value of this type to an exact rational.
    fn from_rational(r: &Rational) -> Self;

    /// Largest integer not above the value.
    fn floor_int(&self) -> i64;
}

impl Scalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-10
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }
}

impl Scalar for Rational {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = isqrt_exact(self.numer())?;
        let d = isqrt_exact(self.denom())?;
        Some(Rational::new(n, d))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn floor_int(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("floor fits in i64")
    }
}

fn isqrt_exact(v: &BigInt) -> Option<BigInt> {
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

/// Shorthand for an integer rational.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `a`, `-a/b`, or a decimal literal such as `0.25` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_digits = int.trim().trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
        let mut n: BigInt = digits.parse().ok()?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Rational::new(n, d));
    }
    let n: BigInt = t.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Render a rational as `n` or `n/d`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Convert between scalar modes.
pub fn to_f64_vec(values: &[Rational]) -> Vec<f64> {
    values.iter().map(|v| v.as_f64()).collect()
}

/// Sign of a permutation given as a sequence of distinct comparable keys.
pub fn permutation_sign<T: Ord>(items: &[T]) -> i32 {
    let mut sign = 1;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if items[i] > items[j] {
                sign = -sign;
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literals() {
        assert_eq!(parse_rational("3/2"), Some(ratio(3, 2)));
        assert_eq!(parse_rational("-0.25"), Some(ratio(-1, 4)));
        assert_eq!(parse_rational("7"), Some(rat(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(ratio(49, 4).sqrt_exact(), Some(ratio(7, 2)));
        assert_eq!(rat(2).sqrt_exact(), None);
        assert_eq!(rat(-1).sqrt_exact(), None);
    }

    #[test]
    fn floors() {
        assert_eq!(ratio(-1, 3).floor_int(), -1);
        assert_eq!(ratio(7, 2).floor_int(), 3);
        assert_eq!((-0.5f64).floor_int(), -1);
    }

    #[test]
    fn permutation_parity() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[2, 0, 1]), 1);
    }
}
