//! The clause-count chain induced by PUR on a random `k`-Horn formula.
//!
//! At stage `t` (with `t` unassigned variables) the state holds `P_i` and
//! `N_i`, the numbers of live positive and negative clauses with `i`
//! literals. One step sets a variable to true; given the counts, the clauses
//! are uniform and independent, so each clause is hit independently:
//!
//! ```text
//! D01  = B(P_1 ⊖ 1, 1/t)                 positive units on the same variable
//! Dp_i = B(P_i, (i-1)/t)                  positive i-clauses losing a negation
//! D0_i = B(P_i - Dp_i, 1/t)               positive i-clauses satisfied
//! Dn_i = B(N_i, i/t)                      negative i-clauses shrinking
//! P_1' = P_1 ⊖ 1 ⊖ D01 + Dp_2             N_1' = N_1 + Dn_2
//! P_i' = P_i - Dp_i - D0_i + Dp_{i+1}     N_i' = N_i - Dn_i + Dn_{i+1}
//! ```
//!
//! The truncated subtraction keeps the chain defined after PUR would have
//! stopped. Probabilities above one (late stages) are clamped.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{clause_count, clause_count_by_length};
use crate::error::{param, Result};
use crate::horn::{m_from_raw, StageCounts};

/// State of the chain for `k = 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PurStateK2 {
    pub t: u32,
    pub p1: u64,
    pub n1: u64,
    pub p2: u64,
    pub n2: u64,
}

impl From<&StageCounts> for PurStateK2 {
    fn from(s: &StageCounts) -> Self {
        PurStateK2 { t: s.t, p1: s.p1(), n1: s.n1(), p2: s.p2(), n2: s.n2() }
    }
}

impl PurStateK2 {
    pub fn total(&self) -> u64 {
        self.p1 + self.n1 + self.p2 + self.n2
    }
}

/// States from `t = n` downward; `states[j]` has `t = n - j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateChainTrajectory {
    pub k: u32,
    pub n: u32,
    pub m: u64,
    pub states: Vec<StageCounts>,
}

fn binomial<R: Rng + ?Sized>(rng: &mut R, n: u64, p: f64) -> u64 {
    if n == 0 || p <= 0.0 {
        0
    } else if p >= 1.0 {
        n
    } else {
        Binomial::new(n, p).expect("probability in (0, 1)").sample(rng)
    }
}

/// Initial state: clause lengths split multinomially with weights
/// `(i+1) C(n,i) / H_k(n)`, and a clause of length `i` is positive with
/// probability `i / (i+1)`.
fn initial_state<R: Rng + ?Sized>(k: u32, n: u32, m: u64, rng: &mut R) -> Result<StageCounts> {
    let total = clause_count(n as u64, k as u64)?;
    let mut positive = vec![0u64; k as usize + 1];
    let mut negative = vec![0u64; k as usize + 1];
    let mut left = m;
    let mut mass_left = total.clone();
    for i in 1..=k {
        let (pos, neg) = clause_count_by_length(n as u64, i as u64)?;
        let of_len = pos + neg;
        let count = if i == k {
            left
        } else {
            let p = BigRational::new(of_len.clone().into(), mass_left.clone().into()).to_f64().unwrap_or(0.0);
            binomial(rng, left, p)
        };
        left -= count;
        mass_left -= of_len;
        let pos = binomial(rng, count, i as f64 / (i + 1) as f64);
        positive[i as usize] = pos;
        negative[i as usize] = count - pos;
    }
    Ok(StageCounts { t: n, positive, negative })
}

fn step<R: Rng + ?Sized>(s: &StageCounts, k: usize, rng: &mut R) -> StageCounts {
    let t = s.t as f64;
    let mut down_p = vec![0u64; k + 2];
    let mut sat_p = vec![0u64; k + 1];
    let mut down_n = vec![0u64; k + 2];
    for i in 2..=k {
        let p = s.positive[i];
        down_p[i] = binomial(rng, p, (i - 1) as f64 / t);
        sat_p[i] = binomial(rng, p - down_p[i], 1.0 / t);
        down_n[i] = binomial(rng, s.negative[i], i as f64 / t);
    }
    let spare = s.positive[1].saturating_sub(1);
    let same = binomial(rng, spare, 1.0 / t);
    let mut positive = vec![0u64; k + 1];
    let mut negative = vec![0u64; k + 1];
    positive[1] = spare - same + down_p[2];
    negative[1] = s.negative[1] + down_n[2];
    for i in 2..=k {
        positive[i] = s.positive[i] - down_p[i] - sat_p[i] + down_p[i + 1];
        negative[i] = s.negative[i] - down_n[i] + down_n[i + 1];
    }
    StageCounts { t: s.t - 1, positive, negative }
}

/// Simulates the chain for a `k`-Horn formula with `m` clauses over `n`
/// variables, for `steps` steps (all `n` when `None`).
pub fn simulate_pur_state_chain<R: Rng + ?Sized>(k: u32, n: u32, m: u64, steps: Option<u32>, rng: &mut R) -> Result<StateChainTrajectory> {
    if k < 2 || k > n {
        return param(format!("need 2 <= k <= n, got k={k}, n={n}"));
    }
    let steps = steps.unwrap_or(n).min(n);
    let mut states = Vec::with_capacity(steps as usize + 1);
    states.push(initial_state(k, n, m, rng)?);
    for _ in 0..steps {
        let next = step(states.last().expect("nonempty"), k as usize, rng);
        states.push(next);
    }
    Ok(StateChainTrajectory { k, n, m, states })
}

/// The `k = 2` chain at raw density `c` (`m = round(c n)` clauses), over all
/// stages `t = n, ..., 0`.
pub fn simulate_pur_state_chain_k2<R: Rng + ?Sized>(c: f64, n: u32, rng: &mut R) -> Result<Vec<PurStateK2>> {
    if n < 2 {
        return param(format!("need n >= 2, got {n}"));
    }
    let m = m_from_raw(n, 2, c)?;
    let traj = simulate_pur_state_chain(2, n, m, None, rng)?;
    Ok(traj.states.iter().map(PurStateK2::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::expected_counts;
    use crate::rng::stream;

    #[test]
    fn zero_density_stays_empty() {
        let traj = simulate_pur_state_chain_k2(0.0, 50, &mut stream(1, &[])).unwrap();
        assert_eq!(traj.len(), 51);
        assert!(traj.iter().all(|s| s.total() == 0));
        assert_eq!(traj.last().unwrap().t, 0);
    }

    #[test]
    fn counts_never_exceed_m() {
        for seed in 0..20 {
            let traj = simulate_pur_state_chain_k2(1.7, 300, &mut stream(seed, &[])).unwrap();
            let m = traj[0].total();
            assert_eq!(m, 510);
            assert!(traj.iter().all(|s| s.total() <= m));
            assert!(traj.windows(2).all(|w| w[1].p2 + w[1].n2 <= w[0].p2 + w[0].n2));
        }
        let traj = simulate_pur_state_chain(4, 60, 900, None, &mut stream(3, &[])).unwrap();
        for s in &traj.states {
            let total: u64 = s.positive.iter().chain(&s.negative).sum();
            assert!(total <= 900);
        }
    }

    #[test]
    fn initial_binary_positive_count() {
        let n = 2000u32;
        let trials = 2000;
        let mut sum = 0.0;
        for seed in 0..trials {
            let traj = simulate_pur_state_chain(2, n, 2000, Some(0), &mut stream(seed, &[])).unwrap();
            sum += traj.states[0].p2() as f64;
        }
        let mean = sum / trials as f64;
        // E[P_2] = m * 3C(n,2)/H * 2/3
        let expect = 2000.0 * (3.0 * 1999.0 * 1000.0) / (4000.0 + 3.0 * 1999.0 * 1000.0) * 2.0 / 3.0;
        assert!((mean - expect).abs() < 2.0, "{mean} vs {expect}");
        assert!((mean - 2.0 / 3.0 * 2000.0).abs() < 3.0 * (n as f64).sqrt());
    }

    #[test]
    fn higher_levels_follow_expected_counts() {
        let (n, k, c) = (200u32, 3u32, 1.0);
        let m = m_from_raw(n, k, c).unwrap();
        let trials = 400;
        let stages = [0usize, 20, 60];
        let mut sums = vec![[0.0f64; 4]; stages.len()];
        for seed in 0..trials {
            let traj = simulate_pur_state_chain(k, n, m, Some(60), &mut stream(seed, &[])).unwrap();
            for (slot, &j) in stages.iter().enumerate() {
                let s = &traj.states[j];
                sums[slot][0] += s.positive[2] as f64;
                sums[slot][1] += s.negative[2] as f64;
                sums[slot][2] += s.positive[3] as f64;
                sums[slot][3] += s.negative[3] as f64;
            }
        }
        for (slot, &j) in stages.iter().enumerate() {
            let t = n - j as u32;
            let (x2, y2) = expected_counts(n, k, c, t, 2).unwrap();
            let (x3, y3) = expected_counts(n, k, c, t, 3).unwrap();
            for (got, want) in sums[slot].iter().map(|s| s / trials as f64).zip([x2, y2, x3, y3]) {
                assert!((got - want).abs() < 0.03 * want + 1.0, "t={t}: {got} vs {want}");
            }
        }
    }
}
