//! Cross-checks of the closed-form coefficient formulas against
//! independent brute-force computations that live only in this file.

use std::collections::HashMap;

use grz_core::exact::{binomial, factorial, grz_constants, multinomial, rat, ratio, Rational};
use grz_core::grz::{
    block_scan, build_h, lemma1_coefficient, product_scan, theorem_block_coefficient, BlockId,
};
use grz_core::series::{monomials_of_degree, multi_inverse_grz, uni_inverse, ExponentVector};
use grz_core::unipoly::UniPoly;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// Pascal's triangle by additions only.
fn pascal_rows(n_max: usize) -> Vec<Vec<BigUint>> {
    let mut rows = vec![vec![BigUint::one()]];
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = vec![BigUint::one(); n + 1];
        for k in 1..n {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

#[test]
fn binomial_matches_pascal_triangle() {
    let rows = pascal_rows(90);
    assert_eq!(rows[11][4], BigUint::from(330u32));
    for (n, row) in rows.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            assert_eq!(&binomial(n as u64, k as i64), v, "C({n},{k})");
        }
    }
}

#[test]
fn multinomial_matches_factorial_product() {
    let fact = |n: u64| (1..=n).fold(BigUint::one(), |a, i| a * i);
    assert_eq!(multinomial(16, &[2; 8]), fact(16) / BigUint::from(256u32));
    assert_eq!(multinomial(16, &[2; 8]), BigUint::from(81_729_648_000u64));
    assert_eq!(factorial(20), fact(20));
}

#[test]
fn constants_r8_exact() {
    let k = grz_constants(8).unwrap();
    let c = Rational::new(BigInt::from(16_777_216u64 * 40_320), BigInt::from(823_543));
    assert_eq!(k.c, c);
    assert_eq!(k.root_bound, Rational::new(BigInt::from(16_777_216u64), BigInt::from(823_543)));
}

/// Coefficients of `1/(1 - e_1 + r! e_r)` by summing `u^k`, `u = e_1 - r! e_r`,
/// with plain hash-map polynomial products.
fn grz_by_geometric_sum(r: usize, degree: u32) -> HashMap<Vec<u32>, BigInt> {
    type Poly = HashMap<Vec<u32>, BigInt>;
    let rf: BigInt = (1..=r as u64).product::<u64>().into();
    let mut u: Poly = HashMap::new();
    for i in 0..r {
        let mut e = vec![0; r];
        e[i] = 1;
        u.insert(e, BigInt::one());
    }
    *u.entry(vec![1; r]).or_insert_with(BigInt::zero) -= &rf;
    let mul = |a: &Poly, b: &Poly| -> Poly {
        let mut out: Poly = HashMap::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if e.iter().sum::<u32>() <= degree {
                    *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
                }
            }
        }
        out
    };
    let mut power: Poly = HashMap::from([(vec![0; r], BigInt::one())]);
    let mut sum = power.clone();
    for _ in 0..degree {
        power = mul(&power, &u);
        for (e, c) in &power {
            *sum.entry(e.clone()).or_insert_with(BigInt::zero) += c;
        }
    }
    sum
}

#[test]
fn recurrence_matches_geometric_sum() {
    for (r, d) in [(2usize, 8u32), (3, 7), (4, 6)] {
        let series = multi_inverse_grz(r as u32, d, None).unwrap();
        let brute = grz_by_geometric_sum(r, d);
        for deg in 0..=d {
            for beta in monomials_of_degree(r, deg) {
                let want = brute.get(beta.entries()).cloned().unwrap_or_default();
                assert_eq!(series.coeff(&beta), Rational::from_integer(want), "r={r} beta={beta:?}");
            }
        }
    }
}

#[test]
fn grz_r2_hand_values() {
    let s = multi_inverse_grz(2, 3, None).unwrap();
    assert_eq!(s.coeff(&ExponentVector::new(vec![1, 1])), rat(0));
    assert_eq!(s.coeff(&ExponentVector::new(vec![2, 1])), rat(-1));
    assert_eq!(s.coeff(&ExponentVector::new(vec![1, 2])), rat(-1));
}

#[test]
fn grz_symmetry() {
    fn permutations(v: &[u32]) -> Vec<Vec<u32>> {
        if v.len() <= 1 {
            return vec![v.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let mut rest = v.to_vec();
            let head = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, head);
                out.push(p);
            }
        }
        out
    }
    for (r, d) in [(2u32, 10u32), (3, 9), (4, 8)] {
        let s = multi_inverse_grz(r, d, None).unwrap();
        for (e, c) in s.terms() {
            for p in permutations(e.entries()) {
                assert_eq!(&s.coeff(&ExponentVector::new(p)), c);
            }
        }
    }
    // sampled cyclic shifts and reversal for larger r
    for (r, d) in [(5u32, 8u32), (6, 7)] {
        let s = multi_inverse_grz(r, d, None).unwrap();
        for (e, c) in s.terms() {
            let mut v = e.entries().to_vec();
            v.rotate_left(2);
            assert_eq!(&s.coeff(&ExponentVector::new(v.clone())), c);
            v.reverse();
            assert_eq!(&s.coeff(&ExponentVector::new(v)), c);
        }
    }
}

#[test]
fn univariate_collapse() {
    for (r, d) in [(2u32, 12u32), (3, 10), (4, 10), (5, 8)] {
        let s = multi_inverse_grz(r, d, None).unwrap();
        let mut denom = vec![rat(0); r as usize + 1];
        denom[0] = rat(1);
        denom[1] = rat(-i64::from(r));
        denom[r as usize] = Rational::from_integer(BigInt::from(factorial(u64::from(r))));
        let uni = uni_inverse(&UniPoly::new(denom), d as usize).unwrap();
        assert_eq!(s.collapse_univariate(), uni.coeffs().to_vec());
    }
}

#[test]
fn lemma1_matches_inversion() {
    let avals = [rat(1), rat(3), ratio(5, 2), ratio(-2, 3)];
    let bvals = [rat(-2), rat(1), ratio(7, 3), rat(0)];
    for r in 2..=6u32 {
        for a in &avals {
            for b in &bvals {
                let mut d = vec![rat(0); r as usize + 1];
                d[0] = rat(1);
                d[1] = -a.clone();
                d[r as usize] += b;
                let s = uni_inverse(&UniPoly::new(d), 60).unwrap();
                for deg in 0..=60 {
                    let id = BlockId::from_degree(r, deg).unwrap();
                    assert_eq!(&lemma1_coefficient(id, a, b), s.coeff(deg as usize));
                }
            }
        }
    }
}

#[test]
fn theorem_blocks_match_expansion_everywhere() {
    for r in 2..=4u32 {
        let s = multi_inverse_grz(r, 12, None).unwrap();
        for d in 0..=12 {
            let id = BlockId::from_degree(r, d).unwrap();
            for beta in monomials_of_degree(r as usize, d) {
                let v = theorem_block_coefficient(id, &beta).unwrap();
                assert_eq!(Rational::from_integer(v), s.coeff(&beta));
            }
        }
    }
}

#[test]
fn product_with_all_alpha_c_equals_block() {
    for r in [4u32, 8] {
        let c = grz_constants(r).unwrap().c;
        for n in 2..=3usize {
            let a = product_scan(r, &vec![c.clone(); n], None).unwrap();
            let b = block_scan(r, n as u32, 0, &c, None).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn h_evaluates_to_scaled_lemma1_coefficient() {
    // coefficient / a^l = sum_k (-1)^k C(..) a^{r(n-k)} b^k = b^n h(a^r / b)
    for r in 2..=5u32 {
        for n in 1..=6u32 {
            for l in 0..r {
                let id = BlockId::new(r, n, l).unwrap();
                let a = rat(i64::from(r));
                let b = ratio(7, 3);
                let lhs = lemma1_coefficient(id, &a, &b)
                    / num_traits::pow(a.clone(), l as usize);
                let s = num_traits::pow(a.clone(), r as usize) / &b;
                let rhs = num_traits::pow(b.clone(), n as usize) * build_h(id).eval(&s);
                assert_eq!(lhs, rhs);
            }
        }
    }
}

/// Coefficient of `(t_1 .. t_r)^k` in `(q e_1^r - p e_r)^k` by multiplying
/// out with every exponent capped at `k`; `c = p / q`.
fn capped_power_coefficient(r: usize, k: u32, p: i128, q: i128) -> i128 {
    type Poly = HashMap<Vec<u8>, i128>;
    let cap = k as u8;
    let mul = |a: &Poly, b: &Poly| -> Poly {
        let mut out: Poly = HashMap::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if e.iter().any(|&x| x > cap) {
                    continue;
                }
                let v = ca.checked_mul(*cb).expect("overflow");
                let slot = out.entry(e).or_insert(0);
                *slot = slot.checked_add(v).expect("overflow");
            }
        }
        out
    };
    let mut e1: Poly = HashMap::new();
    for i in 0..r {
        let mut e = vec![0u8; r];
        e[i] = 1;
        e1.insert(e, 1);
    }
    let mut base: Poly = HashMap::from([(vec![0u8; r], 1)]);
    for _ in 0..r {
        base = mul(&base, &e1);
    }
    for v in base.values_mut() {
        *v *= q;
    }
    *base.entry(vec![1u8; r]).or_insert(0) -= p;
    let mut acc: Poly = HashMap::from([(vec![0u8; r], 1)]);
    for _ in 0..k {
        acc = mul(&acc, &base);
    }
    acc[&vec![cap; r]]
}

#[test]
fn cube_case_counterexample_at_r8_by_brute_force() {
    // c = 8^8 8! / 7^7
    let p: i128 = 16_777_216 * 40_320;
    let q: i128 = 823_543;
    let brute = capped_power_coefficient(8, 3, p, q);
    let c = grz_constants(8).unwrap().c;
    let scan = block_scan(8, 3, 0, &c, None).unwrap();
    let at = scan
        .coefficients
        .iter()
        .find(|(e, _)| e.entries() == [3; 8])
        .map(|(_, v)| v.clone())
        .unwrap();
    let scaled = at * Rational::from_integer(BigInt::from(q).pow(3));
    assert_eq!(scaled, Rational::from_integer(BigInt::from(brute)));
    assert!(brute < 0);
    assert_eq!(
        scan.minimum().unwrap().1,
        &Rational::new(
            "-495986266332304793866941622272000".parse().unwrap(),
            "1628413597910449".parse().unwrap()
        )
    );
}

#[test]
fn square_case_boundary_by_brute_force() {
    // r = 4, k = 2: (e_1^4 - c e_4)^2 at (2,2,2,2), c = 4^4 4!/3^3
    let p: i128 = 256 * 24;
    let q: i128 = 27;
    let brute = capped_power_coefficient(4, 2, p, q);
    let c = grz_constants(4).unwrap().c;
    let scan = block_scan(4, 2, 0, &c, None).unwrap();
    let at = scan
        .coefficients
        .iter()
        .find(|(e, _)| e.entries() == [2; 4])
        .map(|(_, v)| v.clone())
        .unwrap();
    assert_eq!(at * rat(27 * 27), Rational::from_integer(BigInt::from(brute)));
}
