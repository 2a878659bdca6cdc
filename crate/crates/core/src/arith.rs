//! Thin helpers over `num` big integers and rationals.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = BigRational;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(v: Int) -> Rational {
    BigRational::from_integer(v)
}

/// Parses `"p"`, `"-p"` or `"p/q"`; surrounding whitespace is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(t).map_err(|_| bad())?,
        )),
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    // Ratio::to_f64 handles big numerators and denominators without overflow.
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a Int>) -> Int {
    values.into_iter().fold(Int::zero(), |acc, v| acc.gcd(v))
}

pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Int {
    values
        .into_iter()
        .fold(Int::one(), |acc, v| acc.lcm(v.denom()))
}

/// Sup-norm of an integer vector.
pub fn sup_norm(v: &[Int]) -> Int {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Int::zero)
}

pub fn norm_sq(v: &[Int]) -> Int {
    v.iter().map(|x| x * x).sum()
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_rationals(v: &[Int]) -> Vec<Rational> {
    v.iter().cloned().map(rat_int).collect()
}

/// Largest integer `r` with `r*r <= q`, for `q >= 0`.
pub fn floor_sqrt(q: &Rational) -> Int {
    if !q.is_positive() {
        return Int::zero();
    }
    // For integer r: r^2 <= q  <=>  r^2 <= floor(q).
    q.floor().to_integer().sqrt()
}
