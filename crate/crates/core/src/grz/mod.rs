//! Closed-form coefficients for `1/(1 - a t + b t^r)` and for the
//! symmetric block polynomials of the GRZ expansion, plus the checks built
//! on them.
//!
//! With `a = e_1` and `b = r! e_r`, the degree `n r + l` part of the GRZ
//! expansion is
//!
//! ```text
//! e_1^l * sum_{k=0}^{n} (-1)^k C(r(n-k)+k+l, k) e_1^{r(n-k)} (r! e_r)^k
//! ```
//!
//! and the coefficient of `t^beta` in `e_1^m e_r^j` is the multinomial
//! `m! / prod (beta_i - j)!`. Every scan below evaluates such sums on one
//! sorted representative per symmetric orbit.

mod checks;
mod report;

pub use checks::{
    block_scan, lemma2_positivity, lemma3_certify, lemma4_scan, lemma5_scan, product_scan,
    theorem_block, theorem_block_scan, verify_lemma2_identity, IdentityScalar,
};
pub use report::{CertReport, Expectation, Status, Witness};

use num_bigint::{BigInt, BigUint};
use num_traits::{pow, One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GrzError, Result};
use crate::exact::{binomial, factorial, int_to_rat, multinomial_shifted, Rational};
use crate::partition::{count_partitions, orbit_size, partitions};
use crate::series::ExponentVector;
use crate::unipoly::UniPoly;

/// The homogeneous block of total degree `n r + l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockId {
    pub r: u32,
    pub n: u32,
    pub l: u32,
}

impl BlockId {
    pub fn new(r: u32, n: u32, l: u32) -> Result<Self> {
        if r < 2 {
            return Err(GrzError::InvalidParameter(format!("r must be at least 2, got {r}")));
        }
        if l >= r {
            return Err(GrzError::InvalidParameter(format!(
                "l must lie in 0..={}, got {l}",
                r - 1
            )));
        }
        Ok(Self { r, n, l })
    }

    /// Block containing total degree `d`: `n = d div r`, `l = d mod r`.
    pub fn from_degree(r: u32, d: u32) -> Result<Self> {
        if r < 2 {
            return Err(GrzError::InvalidParameter(format!("r must be at least 2, got {r}")));
        }
        Self::new(r, d / r, d % r)
    }

    pub fn degree(&self) -> u32 {
        self.n * self.r + self.l
    }

    /// `C(r(n-k)+k+l, k)`.
    fn weight(&self, k: u32) -> BigUint {
        let top = u64::from(self.r * (self.n - k) + k + self.l);
        binomial(top, i64::from(k))
    }
}

/// `h(s) = sum_{k=0}^{n} (-1)^k C(r(n-k)+k+l, k) s^{n-k}`.
pub fn build_h(id: BlockId) -> UniPoly {
    let n = id.n as usize;
    let mut coeffs = vec![Rational::zero(); n + 1];
    for k in 0..=id.n {
        let w = int_to_rat(id.weight(k));
        coeffs[n - k as usize] = if k % 2 == 0 { w } else { -w };
    }
    UniPoly::new(coeffs)
}

/// Coefficient of `t^{n r + l}` in `1/(1 - a t + b t^r)`.
pub fn lemma1_coefficient(id: BlockId, a: &Rational, b: &Rational) -> Rational {
    let mut sum = Rational::zero();
    for k in 0..=id.n {
        let term = int_to_rat(id.weight(k))
            * pow(a.clone(), (id.r * (id.n - k)) as usize)
            * pow(b.clone(), k as usize);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    pow(a.clone(), id.l as usize) * sum
}

fn check_degree(beta: &ExponentVector, r: u32, degree: u32) -> Result<()> {
    if beta.len() != r as usize {
        return Err(GrzError::InvalidInput(format!(
            "exponent has {} entries, expected {r}",
            beta.len()
        )));
    }
    if beta.total_degree() != degree {
        return Err(GrzError::InvalidInput(format!(
            "exponent has total degree {}, expected {degree}",
            beta.total_degree()
        )));
    }
    Ok(())
}

/// Coefficient of `t^beta` in `(e_1^r - c e_r)^k e_1^{r l}`:
/// `sum_j C(k,j) (-c)^j multinomial(r(k-j+l), beta - j)`.
pub fn block_coefficient(
    r: u32,
    k: u32,
    l: u32,
    c_val: &Rational,
    beta: &ExponentVector,
) -> Result<Rational> {
    check_degree(beta, r, r * (k + l))?;
    Ok(block_coefficient_unchecked(r, k, l, c_val, beta.entries()))
}

fn block_coefficient_unchecked(r: u32, k: u32, l: u32, c_val: &Rational, beta: &[u32]) -> Rational {
    let mut sum = Rational::zero();
    let mut c_pow = Rational::one();
    for j in 0..=k {
        let m = multinomial_shifted(u64::from(r * (k - j + l)), beta, j);
        if !m.is_zero() {
            let term = int_to_rat(binomial(u64::from(k), i64::from(j)) * m) * &c_pow;
            if j % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        c_pow *= c_val;
    }
    sum
}

/// Coefficient of `t^beta` in the degree `n r + l` block of the GRZ expansion.
pub fn theorem_block_coefficient(id: BlockId, beta: &ExponentVector) -> Result<BigInt> {
    check_degree(beta, id.r, id.degree())?;
    Ok(theorem_block_coefficient_unchecked(id, beta.entries()))
}

fn theorem_block_coefficient_unchecked(id: BlockId, beta: &[u32]) -> BigInt {
    let rfact = factorial(u64::from(id.r));
    let mut sum = BigInt::zero();
    let mut rf_pow = BigUint::one();
    for k in 0..=id.n {
        let m = multinomial_shifted(u64::from(id.r * (id.n - k) + id.l), beta, k);
        if !m.is_zero() {
            let term = BigInt::from(id.weight(k) * &rf_pow * m);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        rf_pow *= &rfact;
    }
    sum
}

/// Elementary symmetric functions `sigma_0..=sigma_n` of `values`.
pub fn elementary_symmetric(values: &[Rational]) -> Vec<Rational> {
    let mut sigma = vec![Rational::one()];
    for v in values {
        sigma.push(Rational::zero());
        for j in (1..sigma.len()).rev() {
            let add = &sigma[j - 1] * v;
            sigma[j] += add;
        }
    }
    sigma
}

/// Coefficient of `t^beta` in `prod_i (e_1^r - alpha_i e_r)` given
/// `sigma = elementary_symmetric(alphas)`.
pub fn product_coefficient(r: u32, sigma: &[Rational], beta: &ExponentVector) -> Result<Rational> {
    let n = sigma.len() as u32 - 1;
    check_degree(beta, r, r * n)?;
    Ok(product_coefficient_unchecked(r, sigma, beta.entries()))
}

fn product_coefficient_unchecked(r: u32, sigma: &[Rational], beta: &[u32]) -> Rational {
    let n = sigma.len() as u32 - 1;
    let mut sum = Rational::zero();
    for (j, s) in sigma.iter().enumerate() {
        let j = j as u32;
        let m = multinomial_shifted(u64::from(r * (n - j)), beta, j);
        if m.is_zero() || s.is_zero() {
            continue;
        }
        let term = int_to_rat(m) * s;
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// Coefficients of a symmetric homogeneous polynomial on one sorted
/// representative per orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionScan {
    /// Number of partitions visited.
    pub partitions: usize,
    /// Number of monomials covered, summing orbit sizes.
    pub monomials: BigUint,
    /// Coefficients in partition order (reverse lexicographic).
    pub coefficients: Vec<(ExponentVector, Rational)>,
}

impl PartitionScan {
    /// First minimizing partition in partition order.
    pub fn minimum(&self) -> Option<(&ExponentVector, &Rational)> {
        let mut best: Option<(&ExponentVector, &Rational)> = None;
        for (e, c) in &self.coefficients {
            if best.is_none_or(|(_, b)| c < b) {
                best = Some((e, c));
            }
        }
        best
    }
}

/// Evaluates `coefficient` on every partition of `total` into at most `r`
/// parts. Work is split across the rayon pool; output order is fixed.
pub fn scan_partitions<F>(
    r: u32,
    total: u32,
    max_partitions: Option<u64>,
    coefficient: F,
) -> Result<PartitionScan>
where
    F: Fn(&[u32]) -> Rational + Sync,
{
    if let Some(cap) = max_partitions {
        let need = count_partitions(total, r as usize);
        if need > BigUint::from(cap) {
            return Err(GrzError::ResourceCap {
                cap: "max-partitions",
                requested: need.to_string(),
                limit: cap,
            });
        }
    }
    let parts = partitions(total, r as usize);
    let monomials = parts.iter().map(|p| orbit_size(p)).sum();
    let coefficients: Vec<(ExponentVector, Rational)> = parts
        .into_par_iter()
        .map(|p| {
            let c = coefficient(&p);
            (ExponentVector::new(p), c)
        })
        .collect();
    Ok(PartitionScan {
        partitions: coefficients.len(),
        monomials,
        coefficients,
    })
}
