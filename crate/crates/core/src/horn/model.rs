//! The random model: `m` clauses drawn uniformly, with repetition, from all
//! Horn clauses of length at most `k` over `n` variables.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::types::{HornClause, HornFormula, VarList, Variable};
use crate::combinatorics::clause_count;
use crate::error::{param, Result};
use crate::rng::{stream, StreamRng};

/// How the clause count of a model is specified.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Density {
    /// The clause count itself.
    Clauses(u64),
    /// `m = round(c * n^(k-1))`.
    Raw(f64),
    /// `m = round(chat * H_k(n) / n)`.
    Rescaled(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u32,
    pub k: u32,
    pub density: Density,
    pub seed: u64,
}

/// Rounds a nonnegative exact rational half up.
pub(crate) fn round_half_up(x: &BigRational) -> BigInt {
    let half = BigRational::new(1.into(), 2.into());
    (x + half).floor().to_integer()
}

fn exact(value: f64, what: &str) -> Result<BigRational> {
    if !value.is_finite() || value < 0.0 {
        return param(format!("{what} must be finite and nonnegative, got {value}"));
    }
    BigRational::from_float(value).ok_or_else(|| crate::Error::Parameter(format!("{what} is not representable")))
}

fn to_count(x: BigInt) -> Result<u64> {
    x.to_u64().ok_or_else(|| crate::Error::Capacity(format!("clause count {x} does not fit in 64 bits")))
}

/// `m = round_half_up(chat * H_k(n) / n)`, computed exactly.
pub fn m_from_chat(n: u32, k: u32, chat: f64) -> Result<u64> {
    let h = clause_count(n as u64, k as u64)?;
    let x = exact(chat, "rescaled density")? * BigRational::new(BigInt::from(h), BigInt::from(n));
    to_count(round_half_up(&x))
}

/// `m = round_half_up(c * n^(k-1))`, computed exactly.
pub fn m_from_raw(n: u32, k: u32, c: f64) -> Result<u64> {
    if k == 0 || k > n {
        return param(format!("need 1 <= k <= n, got k={k}, n={n}"));
    }
    let scale = BigInt::from(BigUint::from(n).pow(k - 1));
    let x = exact(c, "density")? * BigRational::from_integer(scale);
    to_count(round_half_up(&x))
}

impl ModelParams {
    pub fn new(n: u32, k: u32, density: Density, seed: u64) -> Result<Self> {
        let p = ModelParams { n, k, density, seed };
        p.resolve_m()?;
        Ok(p)
    }

    /// The clause count this model samples.
    pub fn resolve_m(&self) -> Result<u64> {
        if self.n == 0 || self.k == 0 || self.k > self.n {
            return param(format!("need 1 <= k <= n, got k={}, n={}", self.k, self.n));
        }
        match self.density {
            Density::Clauses(m) => Ok(m),
            Density::Raw(c) => m_from_raw(self.n, self.k, c),
            Density::Rescaled(chat) => m_from_chat(self.n, self.k, chat),
        }
    }

    /// The root stream for this model's seed.
    pub fn rng(&self) -> StreamRng {
        stream(self.seed, &[])
    }
}

/// Draws single clauses uniformly from the universe of Horn clauses of length
/// at most `k` over `n` variables.
///
/// A draw picks the length `i` with probability `(i + 1) C(n, i) / H_k(n)`,
/// then a uniform `i`-subset of variables, then one of the `i + 1` polarity
/// patterns uniformly (one positive designation, or all negative).
#[derive(Clone, Debug)]
pub struct ClauseSampler {
    n: u32,
    k: u32,
    /// cumulative[i - 1] = P(length <= i)
    cumulative: Vec<f64>,
}

impl ClauseSampler {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        let h = clause_count(n as u64, k as u64)?;
        let h = BigInt::from(h);
        let mut acc = BigUint::zero();
        let mut cumulative = Vec::with_capacity(k as usize);
        for i in 1..=k as u64 {
            acc += crate::combinatorics::binomial(n as u64, i) * (i + 1);
            let ratio = BigRational::new(BigInt::from(acc.clone()), h.clone());
            cumulative.push(ratio.to_f64().unwrap_or(1.0));
        }
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(ClauseSampler { n, k, cumulative })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Probability that a drawn clause has length `i`.
    pub fn length_probability(&self, i: u32) -> f64 {
        if i == 0 || i > self.k {
            return 0.0;
        }
        let lo = if i == 1 { 0.0 } else { self.cumulative[i as usize - 2] };
        self.cumulative[i as usize - 1] - lo
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> HornClause {
        let u: f64 = rng.random();
        let len = self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1) + 1;

        // Floyd's algorithm: exactly `len` draws for a uniform subset.
        let n = self.n;
        let mut vars = VarList::new();
        for j in (n - len as u32)..n {
            let t = rng.random_range(0..=j);
            let cand = Variable::from_slot(t as usize);
            if vars.contains(&cand) {
                vars.push(Variable::from_slot(j as usize));
            } else {
                vars.push(cand);
            }
        }
        if len <= 8 {
            for i in 1..vars.len() {
                let mut j = i;
                while j > 0 && vars[j - 1] > vars[j] {
                    vars.swap(j - 1, j);
                    j -= 1;
                }
            }
        } else {
            vars.sort_unstable();
        }

        let pick = rng.random_range(0..=len);
        let positive = vars.get(pick).copied();
        HornClause::from_sorted_unchecked(vars, positive)
    }

    /// Draws a formula with `m` clauses.
    pub fn sample_formula<R: Rng + ?Sized>(&self, m: u64, rng: &mut R) -> HornFormula {
        let clauses = (0..m).map(|_| self.sample(rng)).collect();
        HornFormula::from_trusted(self.n, self.k, clauses)
    }
}

/// Samples a formula from the model described by `params`, drawing from `rng`.
pub fn sample_formula<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> Result<HornFormula> {
    let m = params.resolve_m()?;
    Ok(ClauseSampler::new(params.n, params.k)?.sample_formula(m, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn density_resolution() {
        // H_2(2) = 7; chat = 1 -> m = round(7/2) = round(3.5) = 4 (half up)
        assert_eq!(m_from_chat(2, 2, 1.0).unwrap(), 4);
        assert_eq!(m_from_chat(2, 2, 2.0).unwrap(), 7);
        assert_eq!(m_from_chat(4000, 2, 0.0).unwrap(), 0);
        // H_2(100) = 15050, chat = 1 -> 150.5 -> 151
        assert_eq!(m_from_chat(100, 2, 1.0).unwrap(), 151);
        assert_eq!(m_from_raw(10, 2, 1.5).unwrap(), 15);
        assert_eq!(m_from_raw(10, 3, 0.25).unwrap(), 25);
        assert_eq!(m_from_raw(3, 2, 0.5).unwrap(), 2); // 1.5 rounds up
        assert!(m_from_raw(3, 2, -1.0).is_err());
        assert!(m_from_chat(3, 2, f64::NAN).is_err());
        let p = ModelParams::new(5, 2, Density::Clauses(9), 1).unwrap();
        assert_eq!(p.resolve_m().unwrap(), 9);
        assert!(ModelParams::new(2, 3, Density::Clauses(1), 1).is_err());
    }

    #[test]
    fn empty_model() {
        let p = ModelParams::new(2, 2, Density::Clauses(0), 3).unwrap();
        let f = sample_formula(&p, &mut p.rng()).unwrap();
        assert!(f.is_empty());
        assert_eq!((f.n(), f.k()), (2, 2));
    }

    #[test]
    fn length_probabilities() {
        let s = ClauseSampler::new(2, 2).unwrap();
        assert!((s.length_probability(1) - 4.0 / 7.0).abs() < 1e-15);
        assert!((s.length_probability(2) - 3.0 / 7.0).abs() < 1e-15);
        let s = ClauseSampler::new(3000, 3000).unwrap();
        let total: f64 = (1..=3000).map(|i| s.length_probability(i)).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unit_fraction_k2() {
        let p = ModelParams::new(2, 2, Density::Clauses(1_000_000), 11).unwrap();
        let f = sample_formula(&p, &mut p.rng()).unwrap();
        let units = f.clauses().iter().filter(|c| c.len() == 1).count() as f64 / 1e6;
        assert!((units - 4.0 / 7.0).abs() < 0.002, "unit fraction {units}");
    }

    #[test]
    fn uniform_over_universe_n3_k2() {
        let p = ModelParams::new(3, 2, Density::Clauses(1_000_000), 5).unwrap();
        let f = sample_formula(&p, &mut p.rng()).unwrap();
        let mut freq: HashMap<&HornClause, usize> = HashMap::new();
        for c in f.clauses() {
            *freq.entry(c).or_default() += 1;
        }
        assert_eq!(freq.len(), 15);
        for (c, count) in freq {
            let r = count as f64 / 1e6;
            assert!((r - 1.0 / 15.0).abs() < 0.002, "{c}: {r}");
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = ModelParams::new(30, 4, Density::Rescaled(1.3), 99).unwrap();
        let a = sample_formula(&p, &mut p.rng()).unwrap();
        let b = sample_formula(&p, &mut p.rng()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len() as u64, p.resolve_m().unwrap());
    }
}
