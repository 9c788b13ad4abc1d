//! Dense univariate polynomials over the rationals, Sturm sequences and
//! real-root isolation by exact bisection.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GrzError, Result};
use crate::exact::{format_rational, rat, rational_str, Rational};

/// Maximum bisection depth below the starting interval.
pub const MAX_BISECTION_DEPTH: u32 = 64;

/// Polynomial `sum coeffs[i] x^i`; trailing zeros are always trimmed, so the
/// zero polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// `prod (x - root)`.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::constant(Rational::one()), |acc, q| {
            &acc * &Self::new(vec![-q.clone(), Rational::one()])
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dlead = divisor
            .leading()
            .ok_or_else(|| GrzError::InvalidInput("division by the zero polynomial".into()))?
            .clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] / &dlead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = &rem[idx] - &q * d;
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(GrzError::InvalidInput("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn primitive(&self) -> Self {
        let ints = self.integer_coeffs();
        Self::new(ints.into_iter().map(Rational::from_integer).collect())
    }

    /// Coefficients of the primitive part as integers (positive rescaling).
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Sign of `self(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        sign_at_int(&self.integer_coeffs(), x)
    }

    /// Square-free factorization by Yun's algorithm: pairs `(a_i, i)` with
    /// `self = lc * prod a_i^i`, each `a_i` monic, square-free and pairwise
    /// coprime. Constant factors are omitted.
    pub fn square_free_decomposition(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).expect("gcd divides f");
        let c = fp.div_exact(&a0).expect("gcd divides f'");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let nb = b.div_exact(&a).expect("gcd divides b");
            let nc = d.div_exact(&a).expect("gcd divides d");
            d = &nc - &nb.derivative();
            b = nb;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// `self / gcd(self, self')`, made monic.
    pub fn square_free_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides p").monic()
    }

    /// Cauchy bound `1 + max |a_i / a_n|`: every complex root is strictly smaller in modulus.
    pub fn cauchy_bound(&self) -> Rational {
        let Some(lead) = self.leading() else {
            return Rational::one();
        };
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        Rational::one() + m
    }
}

/// Sign of an integer polynomial at `x = p/q` via homogenized Horner.
fn sign_at_int(coeffs: &[BigInt], x: &Rational) -> i32 {
    if coeffs.is_empty() {
        return 0;
    }
    let (p, q) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for c in coeffs.iter().rev() {
        acc = acc * p + c * &qpow;
        qpow *= q;
    }
    sign_int(&acc)
}

fn sign_int(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Sturm chain of `p`: `p, p', -rem(p_{i-1}, p_i), ...` down to a constant.
///
/// With `normalize`, every member after `p` is replaced by its primitive
/// part; this is a positive rescaling and leaves all sign counts unchanged.
pub fn sturm_chain_with(p: &UniPoly, normalize: bool) -> Result<Vec<UniPoly>> {
    if p.is_zero() {
        return Err(GrzError::InvalidInput(
            "the zero polynomial has no Sturm chain".into(),
        ));
    }
    let norm = |q: UniPoly| if normalize { q.primitive() } else { q };
    let mut chain = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return Ok(chain);
    }
    chain.push(norm(d));
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1])?;
        if r.is_zero() {
            break;
        }
        chain.push(norm(-&r));
    }
    Ok(chain)
}

pub fn sturm_chain(p: &UniPoly) -> Result<Vec<UniPoly>> {
    sturm_chain_with(p, true)
}

/// A Sturm chain prepared for repeated sign-variation queries.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    ints: Vec<Vec<BigInt>>,
}

impl SturmSequence {
    pub fn new(p: &UniPoly) -> Result<Self> {
        Self::from_chain(&sturm_chain(p)?)
    }

    pub fn from_chain(chain: &[UniPoly]) -> Result<Self> {
        if chain.is_empty() {
            return Err(GrzError::InvalidInput("empty Sturm chain".into()));
        }
        Ok(Self {
            ints: chain.iter().map(UniPoly::integer_coeffs).collect(),
        })
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut count = 0;
        let mut last = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Sign variations of the chain at `x`, zeros dropped.
    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.ints.iter().map(|c| sign_at_int(c, x)))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(
            self.ints
                .iter()
                .map(|c| c.last().map(sign_int).unwrap_or(0)),
        )
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.ints.iter().map(|c| {
            let s = c.last().map(sign_int).unwrap_or(0);
            if c.len() % 2 == 0 {
                -s
            } else {
                s
            }
        }))
    }

    /// Distinct real roots of the (square-free) head polynomial.
    pub fn total_real_roots(&self) -> usize {
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }

    /// Distinct roots in the half-open interval `(a, b]`.
    ///
    /// Valid for any endpoints when the head polynomial is square-free.
    pub fn count_half_open(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    pub fn head_sign_at(&self, x: &Rational) -> i32 {
        sign_at_int(&self.ints[0], x)
    }

    /// Distinct roots in the open interval `(a, b)`.
    pub fn count_open(&self, a: &Rational, b: &Rational) -> usize {
        let half = self.count_half_open(a, b);
        if self.head_sign_at(b) == 0 {
            half - 1
        } else {
            half
        }
    }
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
///
/// Both endpoints must be non-roots; see [`count_roots_nudged`] for a
/// wrapper that moves degenerate endpoints.
pub fn count_roots(p: &UniPoly, lo: &Rational, hi: &Rational) -> Result<usize> {
    if p.is_zero() {
        return Err(GrzError::InvalidInput("cannot count roots of the zero polynomial".into()));
    }
    if lo >= hi {
        return Err(GrzError::InvalidInput(format!(
            "empty interval ({}, {})",
            format_rational(lo),
            format_rational(hi)
        )));
    }
    for e in [lo, hi] {
        if p.sign_at(e) == 0 {
            return Err(GrzError::EndpointDegenerate {
                endpoint: format_rational(e),
            });
        }
    }
    let seq = SturmSequence::new(&p.square_free_part())?;
    Ok(seq.count_open(lo, hi))
}

/// An endpoint moved off a root before counting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointShift {
    #[serde(with = "rational_str")]
    pub from: Rational,
    #[serde(with = "rational_str")]
    pub to: Rational,
}

/// [`count_roots`] that moves a root endpoint inward by `1/2^(20+attempt)`
/// until it is no longer a root, returning every shift applied.
pub fn count_roots_nudged(
    p: &UniPoly,
    lo: &Rational,
    hi: &Rational,
) -> Result<(usize, Vec<EndpointShift>)> {
    const ATTEMPTS: u32 = 32;
    let mut shifts = Vec::new();
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    for attempt in 0..ATTEMPTS {
        match count_roots(p, &lo, &hi) {
            Ok(n) => return Ok((n, shifts)),
            Err(GrzError::EndpointDegenerate { .. }) => {
                let delta = Rational::new(BigInt::one(), BigInt::one() << (20 + attempt));
                if p.sign_at(&lo) == 0 {
                    let to = &lo + &delta;
                    shifts.push(EndpointShift { from: lo.clone(), to: to.clone() });
                    lo = to;
                }
                if p.sign_at(&hi) == 0 {
                    let to = &hi - &delta;
                    shifts.push(EndpointShift { from: hi.clone(), to: to.clone() });
                    hi = to;
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(GrzError::EndpointDegenerate {
        endpoint: format!("{} or {}", format_rational(&lo), format_rational(&hi)),
    })
}

/// An interval isolating one distinct real root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    #[serde(with = "rational_str")]
    pub lo: Rational,
    #[serde(with = "rational_str")]
    pub hi: Rational,
    /// `lo == hi` is an exact rational root.
    pub exact: bool,
    pub multiplicity: u32,
}

impl RootInterval {
    fn exact_at(x: Rational, multiplicity: u32) -> Self {
        Self { lo: x.clone(), hi: x, exact: true, multiplicity }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// Isolating intervals for the distinct real roots of `p` in `(lo, hi)`,
/// sorted left to right, each refined to width at most `2^-20` unless a
/// bisection midpoint hit the root exactly.
///
/// Non-exact intervals have non-root endpoints and contain exactly one
/// root of `p`.
pub fn isolate_roots(p: &UniPoly, lo: &Rational, hi: &Rational) -> Result<Vec<RootInterval>> {
    isolate_roots_to_width(p, lo, hi, &default_width())
}

/// `2^-20`.
pub fn default_width() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << 20)
}

/// [`isolate_roots`] with an explicit target width.
pub fn isolate_roots_to_width(
    p: &UniPoly,
    lo: &Rational,
    hi: &Rational,
    width: &Rational,
) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        return Err(GrzError::InvalidInput("the zero polynomial has every point as a root".into()));
    }
    if lo >= hi {
        return Err(GrzError::InvalidInput(format!(
            "empty interval ({}, {})",
            format_rational(lo),
            format_rational(hi)
        )));
    }
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let q = p.square_free_part();
    let iso = Isolator {
        seq: SturmSequence::new(&q)?,
        q: q.integer_coeffs(),
    };
    let mut out = Vec::new();
    let n = iso.seq.count_open(lo, hi);
    iso.bisect(lo.clone(), hi.clone(), n, 0, &mut out)?;
    for iv in &mut out {
        while !iv.exact && iv.width() > *width {
            *iv = iso.halve(iv);
        }
    }

    let factors = p.square_free_decomposition();
    if factors.len() > 1 || factors.first().is_some_and(|f| f.1 != 1) {
        for iv in &mut out {
            iv.multiplicity = multiplicity_in(&factors, iv)?;
        }
    }
    Ok(out)
}

fn multiplicity_in(factors: &[(UniPoly, u32)], iv: &RootInterval) -> Result<u32> {
    for (f, m) in factors {
        let hit = if iv.exact {
            f.sign_at(&iv.lo) == 0
        } else {
            SturmSequence::new(f)?.count_open(&iv.lo, &iv.hi) == 1
        };
        if hit {
            return Ok(*m);
        }
    }
    Ok(1)
}

struct Isolator {
    seq: SturmSequence,
    // square-free part, which changes sign across each of its roots
    q: Vec<BigInt>,
}

impl Isolator {
    fn bisect(
        &self,
        a: Rational,
        b: Rational,
        count: usize,
        depth: u32,
        out: &mut Vec<RootInterval>,
    ) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        if count == 1 && self.seq.head_sign_at(&a) != 0 && self.seq.head_sign_at(&b) != 0 {
            out.push(RootInterval { lo: a, hi: b, exact: false, multiplicity: 1 });
            return Ok(());
        }
        if depth >= MAX_BISECTION_DEPTH {
            return Err(GrzError::BisectionDepth(MAX_BISECTION_DEPTH));
        }
        let m = (&a + &b) / rat(2);
        let mid_root = self.seq.head_sign_at(&m) == 0;
        let left = self.seq.count_open(&a, &m);
        let right = count - left - usize::from(mid_root);
        self.bisect(a, m.clone(), left, depth + 1, out)?;
        if mid_root {
            out.push(RootInterval::exact_at(m.clone(), 1));
        }
        self.bisect(m, b, right, depth + 1, out)
    }

    fn halve(&self, iv: &RootInterval) -> RootInterval {
        halve_by_sign(&self.q, iv)
    }
}

fn halve_by_sign(q: &[BigInt], iv: &RootInterval) -> RootInterval {
    let m = (&iv.lo + &iv.hi) / rat(2);
    let sm = sign_at_int(q, &m);
    if sm == 0 {
        return RootInterval::exact_at(m, iv.multiplicity);
    }
    if sign_at_int(q, &iv.lo) * sm < 0 {
        RootInterval { hi: m, ..iv.clone() }
    } else {
        RootInterval { lo: m, ..iv.clone() }
    }
}

/// Halves an isolating interval of `p`, keeping the half that holds the
/// root. Exact intervals are returned unchanged.
pub fn refine_interval(p: &UniPoly, iv: &RootInterval) -> RootInterval {
    if iv.exact {
        return iv.clone();
    }
    halve_by_sign(&p.square_free_part().integer_coeffs(), iv)
}
