//! Exact integer and rational arithmetic plus the combinatorics kernel.
//!
//! Every comparison that decides a certificate goes through [`Rational`]
//! or [`BigInt`]; floating point never appears on a decision path.

use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{GrzError, Result};

/// Arbitrary-precision rational in canonical form (positive denominator, reduced).
pub type Rational = BigRational;

/// Upper rational envelope for Euler's number, `2.71829 > e`.
pub fn e_upper() -> Rational {
    Rational::new(BigInt::from(271_829), BigInt::from(100_000))
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_to_rat(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

// Factorials above this index are computed on demand and not retained.
const MEMO_LIMIT: u64 = 4096;

static FACTORIALS: OnceLock<RwLock<Vec<BigUint>>> = OnceLock::new();

/// `n!`, memoized in a monotone append-only table shared by all threads.
pub fn factorial(n: u64) -> BigUint {
    if n > MEMO_LIMIT {
        let mut acc = factorial(MEMO_LIMIT);
        for i in MEMO_LIMIT + 1..=n {
            acc *= i;
        }
        return acc;
    }
    let table = FACTORIALS.get_or_init(|| RwLock::new(vec![BigUint::one()]));
    let idx = n as usize;
    if let Some(f) = table.read().expect("factorial table poisoned").get(idx) {
        return f.clone();
    }
    let mut t = table.write().expect("factorial table poisoned");
    while t.len() <= idx {
        let next = t.last().expect("table starts non-empty") * BigUint::from(t.len());
        t.push(next);
    }
    t[idx].clone()
}

/// Binomial coefficient `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = k as u64;
    if n <= 64 {
        return factorial(n) / (factorial(k) * factorial(n - k));
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    acc
}

/// Multinomial coefficient `n! / (parts_1! ... parts_r!)`.
///
/// Returns zero when the parts do not sum to `n` or when any part is
/// negative.
pub fn multinomial(n: u64, parts: &[i64]) -> BigUint {
    if parts.iter().any(|&p| p < 0) {
        return BigUint::zero();
    }
    let sum: i64 = parts.iter().sum();
    if sum as u64 != n {
        return BigUint::zero();
    }
    let denom: BigUint = parts.iter().map(|&p| factorial(p as u64)).product();
    factorial(n) / denom
}

/// `multinomial(n, beta - shift * 1)` without materializing the shifted vector.
pub fn multinomial_shifted(n: u64, beta: &[u32], shift: u32) -> BigUint {
    if beta.iter().any(|&b| b < shift) {
        return BigUint::zero();
    }
    let sum: u64 = beta.iter().map(|&b| u64::from(b - shift)).sum();
    if sum != n {
        return BigUint::zero();
    }
    let denom: BigUint = beta
        .iter()
        .map(|&b| factorial(u64::from(b - shift)))
        .product();
    factorial(n) / denom
}

/// Constants attached to a variable count `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrzConstants {
    pub r: u32,
    /// `r^r * r! / (r-1)^(r-1)`, the largest admissible `alpha` in the
    /// product `(e_1^r - alpha e_r)`.
    pub c: Rational,
    /// `r^r / (r-1)^(r-1)`, the open upper bound for the roots of `h`.
    pub root_bound: Rational,
}

pub fn grz_constants(r: u32) -> Result<GrzConstants> {
    if r < 2 {
        return Err(GrzError::InvalidParameter(format!(
            "r must be at least 2, got {r}"
        )));
    }
    let rr = BigInt::from(r).pow(r);
    let rm = BigInt::from(r - 1).pow(r - 1);
    let root_bound = Rational::new(rr, rm);
    let c = &root_bound * int_to_rat(factorial(u64::from(r)));
    let out = GrzConstants { r, c, root_bound };
    assert_eq!(
        out.c,
        &out.root_bound * int_to_rat(factorial(u64::from(r))),
        "c must equal r! * root_bound"
    );
    assert!(
        out.root_bound < e_upper() * rat(i64::from(r)),
        "root bound must lie below e*r"
    );
    Ok(out)
}

/// `(r-1)^(r-1)`, the largest `b` for which `1/(1 - r t + b t^r)` is positive.
pub fn lemma2_b_max(r: u32) -> Rational {
    Rational::from_integer(BigInt::from(r - 1).pow(r - 1))
}

/// Canonical `"p/q"` string. The denominator is always written, also when it is 1.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || GrzError::InvalidInput(format!("not an exact rational: {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// 15-significant-digit scientific rendering computed with integer arithmetic.
///
/// For human reading only; never compared.
pub fn approx_decimal(x: &Rational) -> String {
    const DIGITS: u32 = 15;
    if x.is_zero() {
        return "0".to_string();
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let num = x.numer().abs();
    let den = x.denom().clone();
    let ten = BigInt::from(10);

    // Estimate the decimal exponent from digit counts, then correct it.
    let mut exp = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ge_pow = |e: i64| -> bool {
        let ten = BigInt::from(10);
        // |x| >= 10^e
        if e >= 0 {
            num >= &den * ten.pow(e as u32)
        } else {
            &num * ten.pow((-e) as u32) >= den
        }
    };
    while !ge_pow(exp) {
        exp -= 1;
    }
    while ge_pow(exp + 1) {
        exp += 1;
    }
    // mantissa = round(|x| * 10^(DIGITS-1-exp))
    let shift = DIGITS as i64 - 1 - exp;
    let (n, d) = if shift >= 0 {
        (&num * ten.pow(shift as u32), den)
    } else {
        (num, den * ten.pow((-shift) as u32))
    };
    let (q, rem) = n.div_rem(&d);
    let mut mant = if rem * 2 >= d { q + 1 } else { q };
    if mant.to_string().len() as u32 > DIGITS {
        mant /= 10;
        exp += 1;
    }
    let digits = mant.to_string();
    let (head, tail) = digits.split_at(1);
    format!("{sign}{head}.{tail}e{exp}")
}

/// Sign of a rational as -1, 0, or 1.
pub fn sign_of(x: &Rational) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Serde adapter writing a [`Rational`] as an exact `"p/q"` string.
pub mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
