//! Finitely supported distributions.

use crate::error::{param, Result};

/// Poisson tail mass dropped by [`poisson_pmf`].
pub const POISSON_TAIL: f64 = 1e-12;

/// Tolerance on the total mass accepted by [`tv_distance`].
pub const MASS_TOL: f64 = 1e-9;

/// `P(Po(lambda) = j)` for `j = 0, 1, ...` up to the first index past the
/// mode at which the remaining mass is below [`POISSON_TAIL`]. The dropped
/// tail is folded into the last entry so the vector sums to 1.
pub fn poisson_pmf(lambda: f64) -> Result<Vec<f64>> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return param(format!("Poisson mean must be finite and nonnegative, got {lambda}"));
    }
    if lambda == 0.0 {
        return Ok(vec![1.0]);
    }
    let ln_lambda = lambda.ln();
    let mut log_p = -lambda;
    let mut out = Vec::new();
    let mut mass = 0.0;
    let mut j = 0u64;
    loop {
        let p = log_p.exp();
        out.push(p);
        mass += p;
        if j as f64 > lambda && 1.0 - mass < POISSON_TAIL {
            break;
        }
        j += 1;
        log_p += ln_lambda - (j as f64).ln();
    }
    *out.last_mut().expect("nonempty") += (1.0 - mass).max(0.0);
    Ok(out)
}

/// `P(B(n, p) = j)` for `j = 0..=n`.
pub fn binomial_pmf(n: u64, p: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return param(format!("success probability must lie in [0, 1], got {p}"));
    }
    let len = n as usize + 1;
    if p == 0.0 || p == 1.0 {
        let mut out = vec![0.0; len];
        out[if p == 0.0 { 0 } else { n as usize }] = 1.0;
        return Ok(out);
    }
    let odds = (p / (1.0 - p)).ln();
    let mut log_b = n as f64 * (-p).ln_1p();
    let mut out = Vec::with_capacity(len);
    for j in 0..=n {
        out.push(log_b.exp());
        log_b += ((n - j) as f64).ln() - ((j + 1) as f64).ln() + odds;
    }
    Ok(out)
}

/// Relative frequencies of the values in `samples`, indexed by value.
pub fn empirical_pmf(samples: &[u64]) -> Vec<f64> {
    let Some(&max) = samples.iter().max() else {
        return Vec::new();
    };
    let mut counts = vec![0u64; max as usize + 1];
    for &s in samples {
        counts[s as usize] += 1;
    }
    let total = samples.len() as f64;
    counts.into_iter().map(|c| c as f64 / total).collect()
}

/// `(1/2) sum_j |a_j - b_j|` over the union of the supports.
pub fn tv_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    for (name, d) in [("first", a), ("second", b)] {
        let total: f64 = d.iter().sum();
        if (total - 1.0).abs() > MASS_TOL || d.iter().any(|&p| !(p >= 0.0)) {
            return param(format!("{name} distribution is not normalized (total mass {total})"));
        }
    }
    let len = a.len().max(b.len());
    let at = |d: &[f64], j: usize| d.get(j).copied().unwrap_or(0.0);
    let sum: f64 = (0..len).map(|j| (at(a, j) - at(b, j)).abs()).sum();
    Ok((0.5 * sum).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmfs_are_normalized() {
        for &l in &[0.0, 1e-3, 0.5, 2.0, 30.0, 400.0] {
            let p = poisson_pmf(l).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12, "lambda={l}");
        }
        for &(n, p) in &[(0, 0.3), (10, 0.001), (1000, 0.1), (1000, 0.999), (5, 0.0), (5, 1.0)] {
            let b = binomial_pmf(n, p).unwrap();
            assert_eq!(b.len(), n as usize + 1);
            assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-10, "n={n} p={p}");
        }
    }

    #[test]
    fn pmf_values() {
        let p = poisson_pmf(2.0).unwrap();
        assert!((p[3] - 8.0 / 6.0 * (-2f64).exp()).abs() < 1e-15);
        let b = binomial_pmf(4, 0.5).unwrap();
        assert!((b[2] - 0.375).abs() < 1e-15);
        assert!(binomial_pmf(3, 1.5).is_err());
        assert!(poisson_pmf(-1.0).is_err());
    }

    #[test]
    fn tv_examples() {
        let a = poisson_pmf(3.0).unwrap();
        assert_eq!(tv_distance(&a, &a).unwrap(), 0.0);
        let bin = binomial_pmf(100, 0.02).unwrap();
        let po = poisson_pmf(2.0).unwrap();
        assert!(tv_distance(&bin, &po).unwrap() <= 0.03);
        let p1 = poisson_pmf(1.0).unwrap();
        let p11 = poisson_pmf(1.1).unwrap();
        assert!(tv_distance(&p1, &p11).unwrap() <= 0.1);
        assert_eq!(tv_distance(&[1.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert!(tv_distance(&[0.5], &[1.0]).is_err());
    }

    #[test]
    fn binomial_poisson_bounds_on_grid() {
        for &n in &[10u64, 100, 1000] {
            for &p in &[0.001, 0.01, 0.1] {
                let d = tv_distance(&binomial_pmf(n, p).unwrap(), &poisson_pmf(n as f64 * p).unwrap()).unwrap();
                let bound = (n as f64 * p * p).min(1.5 * p);
                assert!(d <= bound, "n={n} p={p}: {d} > {bound}");
            }
        }
    }

    #[test]
    fn empirical_frequencies() {
        assert_eq!(empirical_pmf(&[0, 2, 2, 3]), vec![0.25, 0.0, 0.5, 0.25]);
        assert!(empirical_pmf(&[]).is_empty());
    }
}
