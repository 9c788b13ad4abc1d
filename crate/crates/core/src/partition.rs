//! Integer partitions as padded non-increasing exponent vectors.
//!
//! The polynomials scanned by the certificates are symmetric, so a
//! coefficient depends only on the multiset of exponents; enumerating one
//! sorted representative per orbit is enough.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::exact::factorial;

/// All partitions of `total` into at most `parts` parts, each padded with
/// zeros to length `parts`.
///
/// Order: reverse lexicographic, so `[total, 0, ..]` comes first.
pub fn partitions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut current = Vec::with_capacity(parts);
    fill(total, total, parts, &mut current, &mut out);
    out
}

fn fill(remaining: u32, max_part: u32, slots: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if remaining == 0 {
        let mut v = current.clone();
        v.resize(current.len() + slots, 0);
        out.push(v);
        return;
    }
    if slots == 0 {
        return;
    }
    let hi = remaining.min(max_part);
    for p in (1..=hi).rev() {
        // the remaining slots can hold at most p each
        if u64::from(remaining - p) > u64::from(p) * (slots as u64 - 1) {
            break;
        }
        current.push(p);
        fill(remaining - p, p, slots - 1, current, out);
        current.pop();
    }
}

/// Number of partitions of `total` into at most `parts` parts.
pub fn count_partitions(total: u32, parts: usize) -> BigUint {
    // p(n, k) via the standard "parts of size at most k" table, which is
    // conjugate to "at most k parts".
    let n = total as usize;
    let mut table = vec![BigUint::zero(); n + 1];
    table[0] = BigUint::one();
    for size in 1..=parts.min(n.max(1)) {
        for m in size..=n {
            let add = table[m - size].clone();
            table[m] += add;
        }
    }
    table[n].clone()
}

/// Size of the symmetric-group orbit of an exponent vector: `r! / prod(mult!)`.
pub fn orbit_size(beta: &[u32]) -> BigUint {
    let mut sorted = beta.to_vec();
    sorted.sort_unstable();
    let mut denom = BigUint::one();
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    denom *= factorial(run);
    factorial(beta.len() as u64) / denom
}
