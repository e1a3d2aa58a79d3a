//! Exact rationals over arbitrary-precision integers.
//!
//! [`Rat`] is `num_rational::BigRational`, which is always stored reduced
//! with a positive denominator, so numerators and denominators can be
//! compared directly. The text format is `p/q` with an optional leading
//! `-`, and `q` is omitted when it is 1.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = parse_int(s, num)?;
    let den: BigInt = match den {
        Some(d) => {
            if d.starts_with(['-', '+']) {
                return Err(Error::parse(s, "denominator must be unsigned"));
            }
            parse_int(s, d)?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::parse(s, "zero denominator"));
    }
    Ok(Rat::new(num, den))
}

fn parse_int(whole: &str, part: &str) -> Result<BigInt> {
    let digits = part.strip_prefix('-').unwrap_or(part);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(whole, "expected an integer or p/q"));
    }
    part.parse()
        .map_err(|_| Error::parse(whole, "expected an integer or p/q"))
}

/// Exact integer square root, `None` unless `n` is a perfect square.
pub fn exact_isqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Nonnegative exact square root of a rational.
///
/// `Ok(None)` means `q` is not the square of a rational; a negative `q` is a
/// domain error.
pub fn rational_sqrt(q: &Rat) -> Result<Option<Rat>> {
    if q.is_negative() {
        return Err(Error::NegativeSqrt(q.clone()));
    }
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    Ok(match (exact_isqrt(num), exact_isqrt(den)) {
        (Some(n), Some(d)) => Some(Rat::new(
            BigInt::from_biguint(Sign::Plus, n),
            BigInt::from_biguint(Sign::Plus, d),
        )),
        _ => None,
    })
}

pub fn is_rational_square(q: &Rat) -> bool {
    matches!(rational_sqrt(q), Ok(Some(_)))
}

pub(crate) fn to_uint(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

pub(crate) fn from_uint(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}
