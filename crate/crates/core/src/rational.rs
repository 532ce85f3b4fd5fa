//! Exact rational scalars and conversions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the exact code paths.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3"`, `"-7/4"` or a finite decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| Error::Parse(format!("bad decimal `{s}`")))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad integer `{s}`")))?;
    Ok(Q::from_integer(n))
}

/// Canonical string form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Integer square root of a non-negative rational, when it is a perfect square.
pub fn exact_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &n * &n == *x.numer() && &d * &d == *x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Rounds a float onto a grid of spacing `quantum`, for use as a hash key.
pub fn quantize(x: f64, quantum: f64) -> i64 {
    (x / quantum).round() as i64
}
