//! Check suites over parameter grids.
//!
//! Suite items run on the rayon pool; reports are collected in parameter
//! order, so the assembled [`RunManifest`] does not depend on scheduling.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GrzError, Result};
use crate::exact::{factorial, format_rational, grz_constants, int_to_rat, lemma2_b_max, rat, Rational};
use crate::grz::{
    lemma2_positivity, lemma3_certify, lemma4_scan, lemma5_scan, theorem_block,
    theorem_block_scan, verify_lemma2_identity, BlockId, CertReport, Expectation,
    IdentityScalar, Status, Witness,
};
use crate::series::{min_coefficient, monomial_count, multi_inverse_grz};

pub const DEFAULT_MAX_MONOMIALS: u64 = 10_000_000;
pub const DEFAULT_MAX_PARTITIONS: u64 = 1_000_000;
pub const DEFAULT_N_MAX: u32 = 15;
pub const DEFAULT_ORDER: usize = 100;
pub const DEFAULT_KL_MAX: u32 = 3;
pub const DEFAULT_SEED: u64 = 20_190_001;

/// Default expansion degree `min(16, 4 r)`.
pub fn default_degree(r: u32) -> u32 {
    16.min(4 * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCaps {
    pub max_monomials: u64,
    pub max_partitions: u64,
    /// Skip both caps.
    pub force: bool,
}

impl Default for ResourceCaps {
    fn default() -> Self {
        Self {
            max_monomials: DEFAULT_MAX_MONOMIALS,
            max_partitions: DEFAULT_MAX_PARTITIONS,
            force: false,
        }
    }
}

impl ResourceCaps {
    pub fn monomials(&self) -> Option<u64> {
        (!self.force).then_some(self.max_monomials)
    }

    pub fn partitions(&self) -> Option<u64> {
        (!self.force).then_some(self.max_partitions)
    }
}

/// Parameters a suite was run with. Unused fields stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kl_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// All reports of one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub suite: String,
    pub grid: GridSpec,
    pub caps: ResourceCaps,
    pub status: Status,
    /// Failures whose parameters lie inside the tested statement's hypothesis.
    pub unexpected_failures: usize,
    pub reports: Vec<CertReport>,
}

impl RunManifest {
    pub fn assemble(suite: &str, grid: GridSpec, caps: ResourceCaps, reports: Vec<CertReport>) -> Self {
        let status = reports
            .iter()
            .map(|r| r.status)
            .max()
            .unwrap_or(Status::Pass);
        let unexpected_failures = reports
            .iter()
            .filter(|r| r.status == Status::Fail && r.expectation == Expectation::Holds)
            .count();
        Self {
            suite: suite.to_string(),
            grid,
            caps,
            status,
            unexpected_failures,
            reports,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn require_r(r: u32) -> Result<()> {
    if r < 2 {
        return Err(GrzError::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    Ok(())
}

/// Truncated GRZ expansion through total degree `degree`; passes iff no
/// stored coefficient is negative.
pub fn run_desk_grz(r: u32, degree: u32, caps: ResourceCaps) -> Result<RunManifest> {
    require_r(r)?;
    let series = multi_inverse_grz(r, degree, caps.monomials())?;
    let (min, at) = min_coefficient(&series)?;
    let expectation = if r >= 4 { Expectation::Holds } else { Expectation::OutOfHypothesis };
    let mut report = CertReport::new("desk_grz")
        .param("r", r)
        .param("degree", degree)
        .param("stored_terms", series.len())
        .param("monomials", monomial_count(r, degree))
        .param("min", format_rational(&min))
        .expect(expectation);
    report.witness = Some(Witness::exponent(at, min.clone()));
    let status = if min.is_negative() { Status::Fail } else { Status::Pass };
    let grid = GridSpec { r, degree: Some(degree), ..Default::default() };
    Ok(RunManifest::assemble("expand", grid, caps, vec![report.finish(status)]))
}

/// [`lemma3_certify`] for `1 <= n <= n_max`, `0 <= l < r`.
pub fn run_lemma3_grid(r: u32, n_max: u32) -> Result<RunManifest> {
    require_r(r)?;
    if n_max < 1 {
        return Err(GrzError::InvalidParameter("n_max must be at least 1".into()));
    }
    let reports = lemma3_reports(r, n_max)?;
    let grid = GridSpec { r, n_max: Some(n_max), ..Default::default() };
    Ok(RunManifest::assemble("lemma3", grid, ResourceCaps::default(), reports))
}

fn lemma3_reports(r: u32, n_max: u32) -> Result<Vec<CertReport>> {
    let ids: Vec<BlockId> = (1..=n_max)
        .flat_map(|n| (0..r).map(move |l| (n, l)))
        .map(|(n, l)| BlockId::new(r, n, l))
        .collect::<Result<_>>()?;
    ids.into_par_iter().map(lemma3_certify).collect()
}

/// Root report for a single block.
pub fn run_roots(id: BlockId) -> Result<RunManifest> {
    let report = lemma3_certify(id)?;
    let grid = GridSpec { r: id.r, n: Some(id.n), l: Some(id.l), ..Default::default() };
    Ok(RunManifest::assemble("roots", grid, ResourceCaps::default(), vec![report]))
}

/// [`theorem_block`] for every block of degree `<= d_max`, plus a
/// coefficientwise comparison with the recurrence expansion when it fits
/// under the monomial cap.
pub fn run_theorem_blocks(r: u32, d_max: u32, caps: ResourceCaps) -> Result<RunManifest> {
    require_r(r)?;
    let reports = theorem_reports(r, d_max, caps)?;
    let grid = GridSpec { r, d_max: Some(d_max), ..Default::default() };
    Ok(RunManifest::assemble("theorem", grid, caps, reports))
}

fn theorem_reports(r: u32, d_max: u32, caps: ResourceCaps) -> Result<Vec<CertReport>> {
    let ids: Vec<BlockId> = (0..=d_max)
        .map(|d| BlockId::from_degree(r, d))
        .collect::<Result<_>>()?;
    let mut reports: Vec<CertReport> = ids
        .par_iter()
        .map(|&id| theorem_block(id, caps.partitions()))
        .collect::<Result<_>>()?;

    let expectation = if r >= 4 { Expectation::Holds } else { Expectation::OutOfHypothesis };
    let mut cross = CertReport::new("theorem_oracle_crosscheck")
        .param("r", r)
        .param("d_max", d_max)
        .expect(expectation);
    let need = monomial_count(r, d_max);
    if need > BigInt::from(caps.max_monomials) {
        cross.note(format!("skipped: {need} monomials exceed the cap"));
        reports.push(cross.finish(Status::Pass));
        return Ok(reports);
    }
    let series = multi_inverse_grz(r, d_max, None)?;
    let mut compared = 0usize;
    let mut mismatch = None;
    'outer: for id in &ids {
        let scan = theorem_block_scan(*id, caps.partitions())?;
        for (beta, value) in &scan.coefficients {
            compared += 1;
            if series.coeff(beta) != *value {
                mismatch = Some((beta.clone(), value.clone()));
                break 'outer;
            }
        }
    }
    cross.set_param("compared", compared);
    let status = match mismatch {
        None => Status::Pass,
        Some((beta, value)) => {
            cross.note(format!(
                "series coefficient {} differs",
                format_rational(&series.coeff(&beta))
            ));
            cross.witness = Some(Witness::exponent(beta, value));
            Status::Fail
        }
    };
    reports.push(cross.finish(status));
    Ok(reports)
}

/// [`lemma4_scan`] for every `(k, l)` with `1 <= k + l <= kl_max` and
/// `l <= r - 1`, followed by a summary reporting the smallest `n0` such
/// that every scan with `k + l >= n0` passed.
pub fn run_remark_threshold(r: u32, kl_max: u32, caps: ResourceCaps) -> Result<RunManifest> {
    require_r(r)?;
    let reports = remark_reports(r, kl_max, caps)?;
    let grid = GridSpec { r, kl_max: Some(kl_max), ..Default::default() };
    Ok(RunManifest::assemble("remark", grid, caps, reports))
}

fn remark_reports(r: u32, kl_max: u32, caps: ResourceCaps) -> Result<Vec<CertReport>> {
    let pairs: Vec<(u32, u32)> = (1..=kl_max)
        .flat_map(|s| (0..=s).rev().map(move |k| (k, s - k)))
        .filter(|&(_, l)| l < r)
        .collect();
    let mut reports: Vec<CertReport> = pairs
        .par_iter()
        .map(|&(k, l)| lemma4_scan(r, k, l, caps.partitions()))
        .collect::<Result<_>>()?;

    let passed = |s: u32| {
        pairs
            .iter()
            .zip(&reports)
            .filter(|((k, l), _)| k + l == s)
            .all(|(_, rep)| rep.passed())
    };
    let threshold = (1..=kl_max).find(|&n0| (n0..=kl_max).all(passed));
    let mut summary = CertReport::new("remark_threshold")
        .param("r", r)
        .param("kl_max", kl_max)
        .expect(Expectation::OutOfHypothesis);
    let status = match threshold {
        Some(n0) => {
            summary.set_param("n0", n0);
            summary.witness = Some(Witness::value(rat(i64::from(n0))));
            summary.note("threshold observed within the grid only");
            Status::Pass
        }
        None => {
            summary.note("no threshold within the grid");
            Status::Flagged
        }
    };
    reports.push(summary.finish(status));
    Ok(reports)
}

/// Identity checks and positivity expansions for `1/(1 - r t + b t^r)`.
///
/// Without an explicit `b` the grid is `{-1, 0, 1, (r-1)^(r-1)}`.
pub fn run_lemma2_suite(r: u32, b: Option<&Rational>, order: usize, force: bool) -> Result<RunManifest> {
    require_r(r)?;
    let reports = lemma2_reports(r, b, order, force)?;
    let grid = GridSpec {
        r,
        order: Some(order),
        b: b.map(format_rational),
        ..Default::default()
    };
    let caps = ResourceCaps { force, ..Default::default() };
    Ok(RunManifest::assemble("lemma2", grid, caps, reports))
}

fn lemma2_reports(r: u32, b: Option<&Rational>, order: usize, force: bool) -> Result<Vec<CertReport>> {
    let bs: Vec<Rational> = match b {
        Some(b) => vec![b.clone()],
        None => {
            let mut v = vec![rat(-1), rat(0), rat(1), lemma2_b_max(r)];
            v.sort();
            v.dedup();
            v
        }
    };
    let mut reports = vec![verify_lemma2_identity(r, &IdentityScalar::Symbolic)?];
    let per_b: Vec<Vec<CertReport>> = bs
        .par_iter()
        .map(|b| {
            Ok(vec![
                verify_lemma2_identity(r, &IdentityScalar::Value(b.clone()))?,
                lemma2_positivity(r, b, order, force)?,
            ])
        })
        .collect::<Result<_>>()?;
    reports.extend(per_b.into_iter().flatten());
    Ok(reports)
}

/// [`lemma4_scan`] at `(k, l)` in `(1,1), (2,0), (3,0)`.
pub fn run_lemma4_suite(r: u32, caps: ResourceCaps) -> Result<RunManifest> {
    require_r(r)?;
    let reports = lemma4_reports(r, caps)?;
    Ok(RunManifest::assemble("lemma4", GridSpec { r, ..Default::default() }, caps, reports))
}

fn lemma4_reports(r: u32, caps: ResourceCaps) -> Result<Vec<CertReport>> {
    [(1, 1), (2, 0), (3, 0)]
        .par_iter()
        .map(|&(k, l)| lemma4_scan(r, k, l, caps.partitions()))
        .collect()
}

/// Alpha tuples for the product check: boundary cases, two seeded random
/// tuples in `[0, c]`, and `r!` times the upper interval endpoints of the
/// roots of `h` for blocks `(n, 0)` with `n = 2, 3`.
pub fn lemma5_alpha_sets(r: u32, seed: u64) -> Result<Vec<Vec<Rational>>> {
    let c = grz_constants(r)?.c;
    let half = &c / rat(2);
    let mut sets = vec![
        vec![rat(0), rat(0)],
        vec![c.clone(), c.clone()],
        vec![half, c.clone()],
        vec![rat(0), c.clone(), c.clone()],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in [2usize, 3] {
        let set = (0..n)
            .map(|_| &c * Rational::new(BigInt::from(rng.gen_range(0..=1000u32)), BigInt::from(1000)))
            .collect();
        sets.push(set);
    }
    let rfact = int_to_rat(factorial(u64::from(r)));
    for n in [2u32, 3] {
        let rep = lemma3_certify(BlockId::new(r, n, 0)?)?;
        if let Some(Witness::Roots { intervals }) = rep.witness {
            if intervals.len() == n as usize {
                sets.push(intervals.iter().map(|iv| &rfact * &iv.hi).collect());
            }
        }
    }
    Ok(sets)
}

pub fn run_lemma5_suite(r: u32, seed: u64, caps: ResourceCaps) -> Result<RunManifest> {
    require_r(r)?;
    let reports = lemma5_reports(r, seed, caps)?;
    let grid = GridSpec { r, seed: Some(seed), ..Default::default() };
    Ok(RunManifest::assemble("lemma5", grid, caps, reports))
}

fn lemma5_reports(r: u32, seed: u64, caps: ResourceCaps) -> Result<Vec<CertReport>> {
    lemma5_alpha_sets(r, seed)?
        .par_iter()
        .map(|alphas| lemma5_scan(r, alphas, caps.partitions()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma2,
    Lemma3,
    Lemma4,
    Lemma5,
    Theorem,
    Remark,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::Lemma4 => "lemma4",
            Suite::Lemma5 => "lemma5",
            Suite::Theorem => "theorem",
            Suite::Remark => "remark",
            Suite::All => "all",
        }
    }
}

/// Everything `certify` can be parameterized with; `None` selects the default.
#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    pub r: u32,
    pub b: Option<Rational>,
    pub order: Option<usize>,
    pub n_max: Option<u32>,
    pub d_max: Option<u32>,
    pub kl_max: Option<u32>,
    pub seed: Option<u64>,
    pub caps: ResourceCaps,
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<RunManifest> {
    let r = opts.r;
    require_r(r)?;
    let caps = opts.caps;
    let order = opts.order.unwrap_or(DEFAULT_ORDER);
    let n_max = opts.n_max.unwrap_or(DEFAULT_N_MAX);
    let d_max = opts.d_max.unwrap_or_else(|| default_degree(r));
    let kl_max = opts.kl_max.unwrap_or(DEFAULT_KL_MAX);
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);

    match suite {
        Suite::Lemma2 => {
            let mut m = run_lemma2_suite(r, opts.b.as_ref(), order, caps.force)?;
            m.caps = caps;
            Ok(m)
        }
        Suite::Lemma3 => {
            let mut m = run_lemma3_grid(r, n_max)?;
            m.caps = caps;
            Ok(m)
        }
        Suite::Lemma4 => run_lemma4_suite(r, caps),
        Suite::Lemma5 => run_lemma5_suite(r, seed, caps),
        Suite::Theorem => run_theorem_blocks(r, d_max, caps),
        Suite::Remark => run_remark_threshold(r, kl_max, caps),
        Suite::All => {
            let mut reports = lemma2_reports(r, opts.b.as_ref(), order, caps.force)?;
            reports.extend(lemma3_reports(r, n_max)?);
            reports.extend(lemma4_reports(r, caps)?);
            reports.extend(lemma5_reports(r, seed, caps)?);
            reports.extend(theorem_reports(r, d_max, caps)?);
            reports.extend(remark_reports(r, kl_max, caps)?);
            let grid = GridSpec {
                r,
                n_max: Some(n_max),
                d_max: Some(d_max),
                kl_max: Some(kl_max),
                order: Some(order),
                b: opts.b.as_ref().map(format_rational),
                seed: Some(seed),
                ..Default::default()
            };
            Ok(RunManifest::assemble("all", grid, caps, reports))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness_exponent(m: &RunManifest) -> (Vec<u32>, Rational) {
        match &m.reports[0].witness {
            Some(Witness::Exponent { exponent, value, .. }) => (exponent.entries().to_vec(), value.clone()),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn desk_r2_fails_at_21() {
        let m = run_desk_grz(2, 3, ResourceCaps::default()).unwrap();
        assert_eq!(m.status, Status::Fail);
        assert_eq!(m.unexpected_failures, 0);
        assert_eq!(witness_exponent(&m), (vec![2, 1], rat(-1)));
    }

    #[test]
    fn desk_r3_fails() {
        let m = run_desk_grz(3, 6, ResourceCaps::default()).unwrap();
        assert_eq!(m.status, Status::Fail);
        assert!(witness_exponent(&m).1.is_negative());
    }

    #[test]
    fn desk_prefix_property() {
        let caps = ResourceCaps::default();
        assert!(run_desk_grz(4, 10, caps).unwrap().passed());
        for d in [0, 3, 7] {
            assert!(run_desk_grz(4, d, caps).unwrap().passed());
        }
    }

    #[test]
    fn desk_cap() {
        let caps = ResourceCaps { max_monomials: 100, ..Default::default() };
        assert!(matches!(run_desk_grz(4, 16, caps), Err(GrzError::ResourceCap { .. })));
        let forced = ResourceCaps { force: true, ..caps };
        assert!(run_desk_grz(4, 8, forced).is_ok());
    }

    #[test]
    fn lemma3_grid_small() {
        let m = run_lemma3_grid(2, 1).unwrap();
        assert!(m.passed());
        assert_eq!(m.reports.len(), 2);
        assert!(run_lemma3_grid(2, 10).unwrap().passed());
    }

    #[test]
    fn theorem_blocks_r2_fail_at_n1_l1() {
        let m = run_theorem_blocks(2, 3, ResourceCaps::default()).unwrap();
        assert_eq!(m.status, Status::Fail);
        let failing: Vec<_> = m
            .reports
            .iter()
            .filter(|r| r.status == Status::Fail)
            .map(|r| (r.params["n"].clone(), r.params["l"].clone()))
            .collect();
        assert_eq!(failing, vec![("1".to_string(), "1".to_string())]);
        // the cross-check still agrees
        assert!(m.reports.last().unwrap().passed());
    }

    #[test]
    fn theorem_blocks_r8_degree_8_boundary_zero() {
        let m = run_theorem_blocks(8, 8, ResourceCaps::default()).unwrap();
        assert!(m.passed());
        let block = m.reports.iter().find(|r| r.params.get("degree").map(String::as_str) == Some("8")).unwrap();
        assert_eq!(block.params["min"], "0/1");
    }

    #[test]
    fn remark_r2_has_no_threshold() {
        let m = run_remark_threshold(2, 2, ResourceCaps::default()).unwrap();
        let k_positive: Vec<_> = m
            .reports
            .iter()
            .filter(|r| r.check_name == "lemma4_scan" && r.params["k"] != "0")
            .collect();
        assert!(k_positive.iter().all(|r| r.status == Status::Fail));
        assert_eq!(m.reports.last().unwrap().status, Status::Flagged);
    }

    fn find<'a>(m: &'a RunManifest, k: &str, l: &str) -> &'a CertReport {
        m.reports
            .iter()
            .find(|r| r.params.get("k").map(String::as_str) == Some(k) && r.params["l"] == l)
            .unwrap()
    }

    #[test]
    fn remark_r8_cube_case_fails() {
        let m = run_remark_threshold(8, 3, ResourceCaps::default()).unwrap();
        assert!(find(&m, "1", "1").passed());
        assert!(find(&m, "2", "0").passed());
        let cube = find(&m, "3", "0");
        assert_eq!(cube.status, Status::Fail);
        assert_eq!(
            cube.params["min"],
            "-495986266332304793866941622272000/1628413597910449"
        );
        assert_eq!(m.reports.last().unwrap().status, Status::Flagged);
    }

    #[test]
    fn remark_r9_threshold_two() {
        let m = run_remark_threshold(9, 3, ResourceCaps::default()).unwrap();
        for (k, l) in [("1", "1"), ("2", "0"), ("3", "0")] {
            assert!(find(&m, k, l).passed());
        }
        // (1, 0) is e_1^r - c e_r, negative at the all-ones exponent
        assert_eq!(find(&m, "1", "0").status, Status::Fail);
        assert_eq!(m.reports.last().unwrap().params["n0"], "2");
    }

    #[test]
    fn lemma5_alphas_within_range() {
        let c = grz_constants(8).unwrap().c;
        for set in lemma5_alpha_sets(8, 7).unwrap() {
            assert!(set.len() >= 2);
            assert!(set.iter().all(|a| !a.is_negative() && a <= &c));
        }
        assert_eq!(lemma5_alpha_sets(8, 7).unwrap(), lemma5_alpha_sets(8, 7).unwrap());
    }

    #[test]
    fn invalid_r() {
        assert!(run_suite(Suite::All, &SuiteOptions { r: 1, ..Default::default() }).is_err());
    }
}
