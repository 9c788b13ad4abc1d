use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use super::report::{CertReport, Expectation, Status, Witness};
use super::{
    block_coefficient_unchecked, build_h, elementary_symmetric, product_coefficient_unchecked,
    scan_partitions, theorem_block_coefficient_unchecked, BlockId, PartitionScan,
};
use crate::error::{GrzError, Result};
use crate::exact::{format_rational, grz_constants, lemma2_b_max, rat, Rational};
use crate::series::{uni_inverse, ExponentVector, MultiPoly};
use crate::unipoly::{
    count_roots_nudged, isolate_roots, refine_interval, RootInterval, UniPoly,
};

fn require_r(r: u32) -> Result<()> {
    if r < 2 {
        return Err(GrzError::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    Ok(())
}

/// The scalar `b` in `g(t) = 1 - r t + b t^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityScalar {
    Value(Rational),
    /// `b` as an additional formal variable.
    Symbolic,
}

/// Checks `g(t) - g(u) = (u - t)(r - b sum_{k<r} u^k t^{r-1-k})` as a
/// polynomial identity in `t`, `u` (and `b` when symbolic).
pub fn verify_lemma2_identity(r: u32, b: &IdentityScalar) -> Result<CertReport> {
    require_r(r)?;
    let nvars = match b {
        IdentityScalar::Value(_) => 2,
        IdentityScalar::Symbolic => 3,
    };
    let t = MultiPoly::var(nvars, 0);
    let u = MultiPoly::var(nvars, 1);
    let bp = match b {
        IdentityScalar::Value(v) => MultiPoly::constant(nvars, v.clone()),
        IdentityScalar::Symbolic => MultiPoly::var(nvars, 2),
    };
    let rr = MultiPoly::constant(nvars, rat(i64::from(r)));
    let one = MultiPoly::constant(nvars, Rational::one());
    let g = |x: &MultiPoly| &(&one - &(&rr * x)) + &(&bp * &x.pow(r));

    let lhs = &g(&t) - &g(&u);
    let mut geometric = MultiPoly::zero(nvars);
    for k in 0..r {
        geometric = &geometric + &(&u.pow(k) * &t.pow(r - 1 - k));
    }
    let rhs = &(&u - &t) * &(&rr - &(&bp * &geometric));
    let diff = &lhs - &rhs;

    let b_text = match b {
        IdentityScalar::Value(v) => format_rational(v),
        IdentityScalar::Symbolic => "symbolic".to_string(),
    };
    let mut report = CertReport::new("lemma2_identity")
        .param("r", r)
        .param("b", b_text)
        .param("expanded_terms", lhs.len());
    let residual = diff.terms().next().map(|(e, c)| (e.clone(), c.clone()));
    match residual {
        None => Ok(report.finish(Status::Pass)),
        Some((e, c)) => {
            report.witness = Some(Witness::exponent(e, c));
            report.note("identity leaves a nonzero residual term");
            Ok(report.finish(Status::Fail))
        }
    }
}

/// Smallest power of two `>= x` (for `x > 0`), so bisection midpoints are dyadic.
fn dyadic_ceiling(x: &Rational) -> Rational {
    let mut p = Rational::one();
    while &p < x {
        p *= rat(2);
    }
    p
}

/// Positivity of `1/(1 - r t + b t^r)` to order `order`.
///
/// For `b > (r-1)^(r-1)` the call errors unless `allow_out_of_hypothesis`
/// is set, in which case the report is flagged.
pub fn lemma2_positivity(
    r: u32,
    b: &Rational,
    order: usize,
    allow_out_of_hypothesis: bool,
) -> Result<CertReport> {
    require_r(r)?;
    let b_max = lemma2_b_max(r);
    let in_hypothesis = b <= &b_max;
    if !in_hypothesis && !allow_out_of_hypothesis {
        return Err(GrzError::HypothesisViolated(format!(
            "b = {} exceeds (r-1)^(r-1) = {}",
            format_rational(b),
            format_rational(&b_max)
        )));
    }
    let mut g = vec![Rational::zero(); r as usize + 1];
    g[0] = Rational::one();
    g[1] = rat(-i64::from(r));
    g[r as usize] += b;
    let g = UniPoly::new(g);
    let series = uni_inverse(&g, order)?;

    let mut report = CertReport::new("lemma2_positivity")
        .param("r", r)
        .param("b", format_rational(b))
        .param("order", order)
        .param("b_max", format_rational(&b_max));
    if !in_hypothesis {
        report.expectation = Expectation::OutOfHypothesis;
    }

    let first_bad = series
        .coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_positive());

    let mut smallest_root = None;
    if b.is_positive() {
        let bound = dyadic_ceiling(&g.cauchy_bound());
        let roots = isolate_roots(&g, &Rational::zero(), &bound)?;
        match roots.into_iter().next() {
            Some(iv) => {
                report.set_param("t0", describe_interval(&iv));
                smallest_root = Some(iv);
            }
            None => report.note("g has no positive root"),
        }
    }

    let status = match first_bad {
        Some((m, c)) => {
            report.witness = Some(Witness::exponent(ExponentVector::new(vec![m as u32]), c.clone()));
            Status::Fail
        }
        None => {
            report.witness = smallest_root.map(|iv| Witness::Roots { intervals: vec![iv] });
            Status::Pass
        }
    };
    if !in_hypothesis {
        report.note("b outside hypothesis; result is informational");
        let mut rep = report.finish(status);
        rep.status = Status::Flagged;
        return Ok(rep);
    }
    Ok(report.finish(status))
}

fn describe_interval(iv: &RootInterval) -> String {
    if iv.exact {
        format_rational(&iv.lo)
    } else {
        format!("({}, {})", format_rational(&iv.lo), format_rational(&iv.hi))
    }
}

fn lemma4_expectation(r: u32, k: u32, l: u32) -> Expectation {
    let holds = k == 0 || (k + l >= 2 && r >= 8) || (k == 1 && l == 1 && r >= 7);
    if holds {
        Expectation::Holds
    } else {
        Expectation::OutOfHypothesis
    }
}

/// Coefficients of `(e_1^r - c e_r)^k e_1^{r l}` on every partition of `r(k+l)`.
pub fn block_scan(
    r: u32,
    k: u32,
    l: u32,
    c_val: &Rational,
    max_partitions: Option<u64>,
) -> Result<PartitionScan> {
    require_r(r)?;
    scan_partitions(r, r * (k + l), max_partitions, |beta| {
        block_coefficient_unchecked(r, k, l, c_val, beta)
    })
}

fn positivity_report(
    mut report: CertReport,
    scan: &PartitionScan,
    strict: bool,
) -> CertReport {
    report.set_param("partitions", scan.partitions);
    report.set_param("monomials", &scan.monomials);
    let (beta, min) = scan.minimum().expect("a partition scan is never empty");
    report.set_param("min", format_rational(min));
    report.witness = Some(Witness::exponent(beta.clone(), min.clone()));
    let ok = if strict { min.is_positive() } else { !min.is_negative() };
    report.finish(if ok { Status::Pass } else { Status::Fail })
}

/// Strict positivity of `(e_1^r - c e_r)^k e_1^{r l}` with `c = r^r r!/(r-1)^(r-1)`.
pub fn lemma4_scan(r: u32, k: u32, l: u32, max_partitions: Option<u64>) -> Result<CertReport> {
    require_r(r)?;
    if k + l == 0 {
        return Err(GrzError::InvalidParameter("k + l must be at least 1".into()));
    }
    let consts = grz_constants(r)?;
    let scan = block_scan(r, k, l, &consts.c, max_partitions)?;
    let report = CertReport::new("lemma4_scan")
        .param("r", r)
        .param("k", k)
        .param("l", l)
        .param("c", format_rational(&consts.c))
        .expect(lemma4_expectation(r, k, l));
    Ok(positivity_report(report, &scan, true))
}

/// Coefficients of `prod_i (e_1^r - alpha_i e_r)` on every partition of `n r`.
pub fn product_scan(r: u32, alphas: &[Rational], max_partitions: Option<u64>) -> Result<PartitionScan> {
    require_r(r)?;
    let sigma = elementary_symmetric(alphas);
    let n = alphas.len() as u32;
    scan_partitions(r, r * n, max_partitions, |beta| {
        product_coefficient_unchecked(r, &sigma, beta)
    })
}

/// Strict positivity of `prod_i (e_1^r - alpha_i e_r)` for `alpha_i` in `[0, c]`.
pub fn lemma5_scan(r: u32, alphas: &[Rational], max_partitions: Option<u64>) -> Result<CertReport> {
    require_r(r)?;
    if alphas.len() < 2 {
        return Err(GrzError::InvalidParameter(format!(
            "need at least two alphas, got {}",
            alphas.len()
        )));
    }
    let consts = grz_constants(r)?;
    if let Some(bad) = alphas.iter().find(|a| a.is_negative() || **a > consts.c) {
        return Err(GrzError::HypothesisViolated(format!(
            "alpha = {} lies outside [0, c] with c = {}",
            format_rational(bad),
            format_rational(&consts.c)
        )));
    }
    let scan = product_scan(r, alphas, max_partitions)?;
    let alpha_text: Vec<String> = alphas.iter().map(format_rational).collect();
    let expectation = if r >= 8 { Expectation::Holds } else { Expectation::OutOfHypothesis };
    let report = CertReport::new("lemma5_scan")
        .param("r", r)
        .param("n", alphas.len())
        .param("alphas", alpha_text.join(","))
        .expect(expectation);
    Ok(positivity_report(report, &scan, true))
}

/// Coefficients of the degree `n r + l` GRZ block on every partition.
pub fn theorem_block_scan(id: BlockId, max_partitions: Option<u64>) -> Result<PartitionScan> {
    scan_partitions(id.r, id.degree(), max_partitions, |beta| {
        Rational::from_integer(theorem_block_coefficient_unchecked(id, beta))
    })
}

/// Nonnegativity of one homogeneous block of the GRZ expansion.
pub fn theorem_block(id: BlockId, max_partitions: Option<u64>) -> Result<CertReport> {
    let scan = theorem_block_scan(id, max_partitions)?;
    let expectation = if id.r >= 4 { Expectation::Holds } else { Expectation::OutOfHypothesis };
    let report = CertReport::new("theorem_block")
        .param("r", id.r)
        .param("n", id.n)
        .param("l", id.l)
        .param("degree", id.degree())
        .expect(expectation);
    Ok(positivity_report(report, &scan, false))
}

/// Certifies that `h` for this block has `n` distinct real roots, all
/// strictly inside `(0, r^r/(r-1)^(r-1))`.
pub fn lemma3_certify(id: BlockId) -> Result<CertReport> {
    let consts = grz_constants(id.r)?;
    let bound = consts.root_bound.clone();
    let h = build_h(id);
    let mut report = CertReport::new("lemma3_certify")
        .param("r", id.r)
        .param("n", id.n)
        .param("l", id.l)
        .param("root_bound", format_rational(&bound))
        .param("h", &h);
    if id.n == 0 {
        report.witness = Some(Witness::Roots { intervals: Vec::new() });
        report.note("h is constant");
        return Ok(report.finish(Status::Pass));
    }
    let n = id.n as usize;

    // (i) all roots real: count over (-M, M) with M past the Cauchy bound
    let coeff_max = h
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    let m = Rational::one() + coeff_max.max(Rational::one());
    let (real_count, shifts_real) = count_roots_nudged(&h, &-m.clone(), &m)?;
    report.set_param("real_roots", real_count);

    // (iii) the bound itself is not a root
    let bound_is_root = h.sign_at(&bound) == 0;

    // (ii) all roots in (0, bound)
    let (inside_count, shifts_inside) = count_roots_nudged(&h, &Rational::zero(), &bound)?;
    report.set_param("roots_in_interval", inside_count);
    for s in shifts_real.iter().chain(&shifts_inside) {
        report.note(format!(
            "endpoint shifted from {} to {}",
            format_rational(&s.from),
            format_rational(&s.to)
        ));
    }

    let mut intervals = isolate_roots(&h, &Rational::zero(), &bound)?;
    for iv in &mut intervals {
        while !iv.exact && (iv.lo.is_zero() || iv.hi == bound) {
            *iv = refine_interval(&h, iv);
        }
    }

    let mut failures = Vec::new();
    if real_count != n {
        failures.push(format!("{real_count} distinct real roots, expected {n}"));
    }
    if inside_count != n || intervals.len() != n {
        failures.push(format!("{inside_count} roots inside (0, root_bound), expected {n}"));
    }
    for iv in &intervals {
        if !(iv.lo.is_positive() && iv.hi < bound) {
            failures.push(format!("interval {} not strictly inside", describe_interval(iv)));
        }
        if iv.multiplicity != 1 {
            failures.push(format!("root {} has multiplicity {}", describe_interval(iv), iv.multiplicity));
        }
        if !iv.exact && h.sign_at(&iv.lo) * h.sign_at(&iv.hi) >= 0 {
            failures.push(format!("no sign change across {}", describe_interval(iv)));
        }
        // alpha < root_bound  <=>  r^r / alpha > (r-1)^(r-1)
        let rr = Rational::from_integer(BigInt::from(id.r).pow(id.r));
        if iv.hi.is_positive() && rr / &iv.hi <= lemma2_b_max(id.r) {
            failures.push(format!("scaling check fails at {}", format_rational(&iv.hi)));
        }
    }

    // Vieta: the roots sum to r(n-1)+l+1
    let vieta = rat(i64::from(id.r * (id.n - 1) + id.l + 1));
    let lo_sum: Rational = intervals.iter().map(|iv| iv.lo.clone()).sum();
    let hi_sum: Rational = intervals.iter().map(|iv| iv.hi.clone()).sum();
    if -h.coeff(n - 1) != vieta {
        failures.push("s^(n-1) coefficient disagrees with the Vieta sum".into());
    }
    if !(lo_sum <= vieta && vieta <= hi_sum) {
        failures.push(format!(
            "Vieta sum {} outside [{}, {}]",
            format_rational(&vieta),
            format_rational(&lo_sum),
            format_rational(&hi_sum)
        ));
    }
    report.set_param("vieta_sum", format_rational(&vieta));
    report.witness = Some(Witness::Roots { intervals });

    if bound_is_root {
        report.note("root_bound is itself a root of h");
        let mut rep = report.finish(Status::Pass);
        rep.status = if failures.is_empty() { Status::Flagged } else { Status::Fail };
        for f in failures {
            rep.note(f);
        }
        return Ok(rep);
    }
    let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
    for f in failures {
        report.note(f);
    }
    Ok(report.finish(status))
}
