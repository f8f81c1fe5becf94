//! Exact counting over the Horn clause universe.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{param, Result};

/// Exact binomial coefficient, zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for j in 0..r {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// `C(n, r)` as a float (exact value, rounded once).
pub fn binomial_f64(n: u64, r: u64) -> f64 {
    binomial(n, r).to_f64().unwrap_or(f64::INFINITY)
}

/// Number of Horn clauses of length exactly `i` over `n` variables, split as
/// `(positive, negative)`: `(i * C(n, i), C(n, i))`.
pub fn clause_count_by_length(n: u64, i: u64) -> Result<(BigUint, BigUint)> {
    if i < 1 || i > n {
        return param(format!("clause length {i} outside [1, {n}]"));
    }
    let c = binomial(n, i);
    Ok((&c * i, c))
}

/// `H_k(n)`: the number of nonempty Horn clauses of length at most `k` over
/// `n` variables, `sum_{i=1..k} (i + 1) C(n, i)`.
pub fn clause_count(n: u64, k: u64) -> Result<BigUint> {
    if k < 1 || k > n {
        return param(format!("need 1 <= k <= n, got k={k}, n={n}"));
    }
    Ok((1..=k).map(|i| binomial(n, i) * (i + 1)).sum())
}

/// `S_j^i = C(i, 0) + ... + C(i, j)`, with `C(i, t) = 0` for `t > i`.
pub fn s_partial(i: u64, j: u64) -> BigUint {
    (0..=j.min(i)).map(|t| binomial(i, t)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Enumerates every Horn clause of length <= k over n variables as
    /// (variable mask, positive bit or None).
    fn enumerate_universe(n: u32, k: u32) -> Vec<(u32, Option<u32>)> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            if mask.count_ones() > k {
                continue;
            }
            out.push((mask, None));
            for b in 0..n {
                if mask >> b & 1 == 1 {
                    out.push((mask, Some(b)));
                }
            }
        }
        out
    }

    #[test]
    fn clause_count_examples() {
        assert_eq!(clause_count(2, 2).unwrap(), BigUint::from(7u32));
        assert_eq!(clause_count(1, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(clause_count(3, 2).unwrap(), BigUint::from(15u32));
        assert!(clause_count(2, 3).is_err());
        assert!(clause_count(2, 0).is_err());
    }

    #[test]
    fn clause_count_matches_enumeration() {
        for n in 1..=8u32 {
            for k in 1..=n {
                let brute = enumerate_universe(n, k).len();
                assert_eq!(clause_count(n as u64, k as u64).unwrap(), BigUint::from(brute), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn clause_count_by_length_examples() {
        let big = |v: u32| BigUint::from(v);
        assert_eq!(clause_count_by_length(3, 2).unwrap(), (big(6), big(3)));
        assert_eq!(clause_count_by_length(5, 1).unwrap(), (big(5), big(5)));
        assert_eq!(clause_count_by_length(4, 4).unwrap(), (big(4), big(1)));
        assert!(clause_count_by_length(4, 5).is_err());
        assert!(clause_count_by_length(4, 0).is_err());
    }

    #[test]
    fn by_length_matches_enumeration() {
        let n = 6;
        let u = enumerate_universe(n, n);
        for i in 1..=n {
            let pos = u.iter().filter(|(m, p)| m.count_ones() == i && p.is_some()).count();
            let neg = u.iter().filter(|(m, p)| m.count_ones() == i && p.is_none()).count();
            let (p, q) = clause_count_by_length(n as u64, i as u64).unwrap();
            assert_eq!((p, q), (BigUint::from(pos), BigUint::from(neg)));
        }
    }

    #[test]
    fn s_partial_examples() {
        assert_eq!(s_partial(3, 1), BigUint::from(4u32));
        assert_eq!(s_partial(1, 2), BigUint::from(2u32));
        assert_eq!(s_partial(5, 5), BigUint::from(32u32));
        assert_eq!(s_partial(0, 0), BigUint::from(1u32));
    }

    #[test]
    fn large_counts_stay_exact() {
        // H_2(4000) = 2*4000 + 3*C(4000, 2)
        assert_eq!(clause_count(4000, 2).unwrap(), BigUint::from(8000u64 + 3 * 7_998_000));
        let h = clause_count(200, 200).unwrap();
        // sum (i+1) C(n,i) over i>=1 = (n+2) 2^(n-1) - 1
        let expect = (BigUint::from(202u32) << 199usize) - 1u32;
        assert_eq!(h, expect);
    }
}
