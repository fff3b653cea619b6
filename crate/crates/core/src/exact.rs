//! Exact rational helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub type Rational = BigRational;

#[inline]
pub fn big(x: u128) -> BigInt {
    BigInt::from(x)
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    BigRational::new(num.into(), den.into())
}

pub fn integer(x: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(x.into())
}

/// `n^k` as a big integer.
pub fn pow(n: u128, k: u32) -> BigInt {
    num_traits::pow(big(n), k as usize)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `lhs / bound`, or 0 when the bound vanishes.
pub fn ratio_f64(lhs: f64, bound: f64) -> f64 {
    if bound.is_zero() {
        0.0
    } else {
        lhs / bound
    }
}

/// Parses `"a"`, `"a/b"` or a finite decimal such as `"1.5"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Rational>() {
        return Some(r);
    }
    let (int_part, frac_part) = s.split_once('.')?;
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    Some(BigRational::new(num, den))
}
