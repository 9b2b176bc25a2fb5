//! Exact rational helpers: parsing/printing the `p/q` literal format and
//! conversion to `f64` for entropy evaluation.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shorthand for building a rational from small integers. Panics on q = 0.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Rational value of an integer.
pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Nearest `f64` to an exact rational. Values this library produces stay
/// far inside the representable range; out-of-range inputs map to NaN and
/// are caught downstream by finiteness checks.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses a nonnegative rational literal: a digit string `p` or `p/q` with
/// q > 0. Signs, decimals, and exponents are rejected so that weight files
/// stay exact.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidRational(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    let digits = |part: &str| -> Result<BigInt> {
        if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        part.parse::<BigInt>().map_err(|_| bad())
    };
    match t.split_once('/') {
        None => Ok(BigRational::from_integer(digits(t)?)),
        Some((p, q)) => {
            let numer = digits(p)?;
            let denom = digits(q)?;
            if denom.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(numer, denom))
        }
    }
}

/// Canonical text form: `p` for integers, reduced `p/q` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// All reduced fractions p/q with 1 ≤ p, q ≤ max, sorted ascending.
pub fn reduced_fractions(max: u64) -> Vec<BigRational> {
    let mut out = Vec::new();
    for q in 1..=max {
        for p in 1..=max {
            if num::integer::gcd(p, q) == 1 {
                out.push(rat(p as i64, q as i64));
            }
        }
    }
    out.sort();
    out
}
