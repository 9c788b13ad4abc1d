//! Truncated formal power series.
//!
//! [`UniSeries`] is dense in one variable. [`MultiSeries`] is sparse in `r`
//! variables and truncated by total degree. Both inversion routines here
//! work from the denominator alone by coefficient recurrence, so they act as
//! independent oracles for the closed forms in [`crate::grz`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{GrzError, Result};
use crate::exact::{binomial, factorial, format_rational, int_to_rat, Rational};
use crate::unipoly::UniPoly;

/// Coefficients of powers `0..=order` of a truncated univariate series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniSeries {
    coeffs: Vec<Rational>,
}

impl UniSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }
}

/// `1 / denom` to order `order`, using `c_0 = 1/d_0`,
/// `c_m = -(1/d_0) * sum_{j>=1} d_j c_{m-j}`.
pub fn uni_inverse(denom: &UniPoly, order: usize) -> Result<UniSeries> {
    let d = denom.coeffs();
    let d0 = match d.first() {
        Some(c) if !c.is_zero() => c.clone(),
        _ => return Err(GrzError::NotInvertible),
    };
    let inv0 = d0.recip();
    let mut coeffs: Vec<Rational> = Vec::with_capacity(order + 1);
    coeffs.push(inv0.clone());
    for m in 1..=order {
        let mut acc = Rational::zero();
        for (j, dj) in d.iter().enumerate().skip(1).take(m) {
            if !dj.is_zero() {
                acc += dj * &coeffs[m - j];
            }
        }
        coeffs.push(-(acc * &inv0));
    }
    Ok(UniSeries { coeffs })
}

/// Exponents `(beta_1, .., beta_r)` of a monomial.
///
/// Ordering is the serialization order used everywhere: total degree
/// ascending, then lexicographically descending within a degree, so
/// `(3,0) < (2,1) < (1,2) < (0,3)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(r: usize) -> Self {
        Self(vec![0; r])
    }

    pub fn unit(r: usize, i: usize) -> Self {
        let mut v = vec![0; r];
        v[i] = 1;
        Self(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `self - shift * 1`, or `None` if an entry would go negative.
    pub fn checked_shift_down(&self, shift: u32) -> Option<Self> {
        self.0
            .iter()
            .map(|&b| b.checked_sub(shift))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub fn checked_sub_unit(&self, i: usize) -> Option<Self> {
        let mut v = self.0.clone();
        v[i] = v[i].checked_sub(1)?;
        Some(Self(v))
    }

    /// Entries sorted non-increasingly (the partition representative).
    pub fn sorted_desc(&self) -> Self {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Self(v)
    }

    fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// All exponent vectors of length `r` and total degree `d`, in
/// serialization order.
pub fn monomials_of_degree(r: usize, d: u32) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(r: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if cur.len() + 1 == r {
            cur.push(left);
            out.push(ExponentVector(cur.clone()));
            cur.pop();
            return;
        }
        for v in (0..=left).rev() {
            cur.push(v);
            rec(r, left - v, cur, out);
            cur.pop();
        }
    }
    if r == 0 {
        if d == 0 {
            out.push(ExponentVector(Vec::new()));
        }
        return out;
    }
    rec(r, d, &mut cur, &mut out);
    out
}

/// Sparse multivariate polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(ExponentVector::zero(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(ExponentVector::unit(nvars, i), Rational::one());
        p
    }

    /// `e_1 = t_1 + .. + t_r`.
    pub fn e1(nvars: usize) -> Self {
        (0..nvars).fold(Self::zero(nvars), |acc, i| &acc + &Self::var(nvars, i))
    }

    /// `e_r = t_1 * .. * t_r`.
    pub fn e_top(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(ExponentVector(vec![1; nvars]), Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, e: ExponentVector, c: Rational) {
        assert_eq!(e.len(), self.nvars, "exponent length must match variable count");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, Rational::one()), |acc, _| &acc * self)
    }

    /// Product keeping only terms of total degree `<= max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            if ea.total_degree() > max_degree {
                break;
            }
            for (eb, cb) in &other.terms {
                if ea.total_degree() + eb.total_degree() > max_degree {
                    break;
                }
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }

    /// Homogeneous part of total degree `d`.
    pub fn graded_slice(&self, d: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.terms.iter().filter(|(e, _)| e.total_degree() == d) {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.mul_truncated(rhs, u32::MAX)
    }
}

/// A multivariate series truncated at total degree `max_total_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries {
    max_total_degree: u32,
    poly: MultiPoly,
}

impl MultiSeries {
    pub fn from_poly(poly: MultiPoly, max_total_degree: u32) -> Self {
        let mut kept = MultiPoly::zero(poly.nvars);
        for (e, c) in poly.terms.into_iter() {
            if e.total_degree() <= max_total_degree {
                kept.terms.insert(e, c);
            }
        }
        Self { max_total_degree, poly: kept }
    }

    pub fn r(&self) -> usize {
        self.poly.nvars
    }

    pub fn max_total_degree(&self) -> u32 {
        self.max_total_degree
    }

    pub fn coeff(&self, e: &ExponentVector) -> Rational {
        self.poly.coeff(e)
    }

    /// Stored (nonzero) terms in serialization order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.poly.terms()
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poly.is_empty()
    }

    pub fn as_poly(&self) -> &MultiPoly {
        &self.poly
    }

    /// Image under `t_i -> t` for every `i`: coefficient `m` is the sum over `|beta| = m`.
    pub fn collapse_univariate(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.max_total_degree as usize + 1];
        for (e, c) in self.terms() {
            out[e.total_degree() as usize] += c;
        }
        out
    }
}

impl Serialize for MultiSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exponent: &'a ExponentVector,
            coefficient: String,
        }
        let terms: Vec<Term<'_>> = self
            .terms()
            .map(|(e, c)| Term { exponent: e, coefficient: format_rational(c) })
            .collect();
        let mut st = s.serialize_struct("MultiSeries", 3)?;
        st.serialize_field("r", &self.r())?;
        st.serialize_field("max_total_degree", &self.max_total_degree)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for MultiSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Term {
            exponent: ExponentVector,
            coefficient: String,
        }
        #[derive(Deserialize)]
        struct Raw {
            r: usize,
            max_total_degree: u32,
            terms: Vec<Term>,
        }
        let raw = Raw::deserialize(d)?;
        let mut poly = MultiPoly::zero(raw.r);
        for t in raw.terms {
            if t.exponent.len() != raw.r {
                return Err(serde::de::Error::custom("exponent length does not match r"));
            }
            let c = crate::exact::parse_rational(&t.coefficient).map_err(serde::de::Error::custom)?;
            poly.add_term(t.exponent, c);
        }
        Ok(MultiSeries::from_poly(poly, raw.max_total_degree))
    }
}

/// Number of monomials of total degree `<= degree` in `r` variables, `C(D + r, r)`.
pub fn monomial_count(r: u32, degree: u32) -> BigInt {
    BigInt::from(binomial(u64::from(degree) + u64::from(r), i64::from(r)))
}

/// Truncated expansion of `1 / (1 - sum t_i + r! prod t_i)` through total degree `degree`.
///
/// Recurrence: `c_0 = 1`, `c_beta = sum_i c_{beta - e_i} - r! c_{beta - 1}`.
/// Degrees are filled in order; the monomials of one degree are computed in
/// parallel from the completed lower degrees. `max_monomials` of `None`
/// disables the size check.
pub fn multi_inverse_grz(r: u32, degree: u32, max_monomials: Option<u64>) -> Result<MultiSeries> {
    if r < 2 {
        return Err(GrzError::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    if let Some(cap) = max_monomials {
        let need = monomial_count(r, degree);
        if need > BigInt::from(cap) {
            return Err(GrzError::ResourceCap {
                cap: "max-monomials",
                requested: need.to_string(),
                limit: cap,
            });
        }
    }
    let rn = r as usize;
    let rfact = int_to_rat(factorial(u64::from(r)));
    let mut poly = MultiPoly::constant(rn, Rational::one());
    for d in 1..=degree {
        let slice: Vec<(ExponentVector, Rational)> = monomials_of_degree(rn, d)
            .into_par_iter()
            .map(|beta| {
                let mut acc = Rational::zero();
                for i in 0..rn {
                    if let Some(prev) = beta.checked_sub_unit(i) {
                        if let Some(c) = poly.terms.get(&prev) {
                            acc += c;
                        }
                    }
                }
                if let Some(prev) = beta.checked_shift_down(1) {
                    if let Some(c) = poly.terms.get(&prev) {
                        acc -= &rfact * c;
                    }
                }
                (beta, acc)
            })
            .collect();
        for (beta, c) in slice {
            if !c.is_zero() {
                poly.terms.insert(beta, c);
            }
        }
    }
    Ok(MultiSeries { max_total_degree: degree, poly })
}

/// Smallest stored coefficient and the first exponent attaining it in
/// serialization order. Absent monomials are exact zeros and are not
/// considered.
pub fn min_coefficient(s: &MultiSeries) -> Result<(Rational, ExponentVector)> {
    let mut best: Option<(&Rational, &ExponentVector)> = None;
    for (e, c) in s.terms() {
        if best.is_none_or(|(b, _)| c < b) {
            best = Some((c, e));
        }
    }
    best.map(|(c, e)| (c.clone(), e.clone()))
        .ok_or_else(|| GrzError::InvalidInput("empty series has no minimum".into()))
}
