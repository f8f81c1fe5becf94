//! First-passage law of the queue `Q_0 = 1`, `Q_{t+1} = Q_t - 1 + Po(lambda)`.

use serde::{Deserialize, Serialize};

use super::dist::poisson_pmf;
use crate::analytics::queue_hit_prob;
use crate::error::{param, Error, Result};

/// Bound on the hitting probability lost by truncating the state space.
pub const TRUNCATION_TOL: f64 = 1e-12;

const MAX_STATES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingTime {
    pub lambda: f64,
    /// `hit_prob_by_t[t] = P(T <= t)` for `t = 0..=tmax`.
    pub hit_prob_by_t: Vec<f64>,
    /// `E[T | T <= tmax]`, NaN if the queue cannot empty by `tmax`.
    pub conditional_mean: f64,
    /// Number of queue states kept.
    pub states: usize,
    /// Upper bound on the hitting probability lost to truncation.
    pub truncation_error: f64,
}

impl HittingTime {
    pub fn first_hit(&self, t: usize) -> f64 {
        match t {
            0 => self.hit_prob_by_t[0],
            _ => self.hit_prob_by_t[t] - self.hit_prob_by_t[t - 1],
        }
    }
}

/// Exact dynamic programming over queue lengths `0..=S`; `S` is doubled until
/// the mass pushed beyond it, weighted by the probability `rho^S` of ever
/// returning, is below [`TRUNCATION_TOL`].
pub fn hitting_time_dp(lambda: f64, tmax: usize) -> Result<HittingTime> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return param(format!("arrival rate must be positive, got {lambda}"));
    }
    if tmax < 1 {
        return param("tmax must be at least 1");
    }
    let rho = queue_hit_prob(lambda)?;
    let po = poisson_pmf(lambda)?;
    let mut states = 64usize;
    loop {
        let (first_hit, dropped) = run(&po, states, tmax);
        let truncation_error = dropped * rho.powi(states as i32);
        if truncation_error < TRUNCATION_TOL || states >= MAX_STATES {
            if truncation_error >= TRUNCATION_TOL {
                return Err(Error::Capacity(format!("queue truncation error {truncation_error} at {states} states")));
            }
            let mut cumulative = Vec::with_capacity(tmax + 1);
            let (mut acc, mut weighted) = (0.0, 0.0);
            for (t, &p) in first_hit.iter().enumerate() {
                acc += p;
                weighted += t as f64 * p;
                cumulative.push(acc);
            }
            let conditional_mean = if acc > 0.0 { weighted / acc } else { f64::NAN };
            return Ok(HittingTime { lambda, hit_prob_by_t: cumulative, conditional_mean, states, truncation_error });
        }
        states *= 2;
    }
}

/// Returns `P(T = t)` for `t = 0..=tmax` and the total mass pushed past
/// `states`.
fn run(po: &[f64], states: usize, tmax: usize) -> (Vec<f64>, f64) {
    let mut cur = vec![0.0; states + 1];
    let mut next = vec![0.0; states + 1];
    cur[1] = 1.0;
    let mut first_hit = vec![0.0; tmax + 1];
    let mut dropped = 0.0;
    for hit in first_hit.iter_mut().skip(1) {
        next.iter_mut().for_each(|v| *v = 0.0);
        for (q, &mass) in cur.iter().enumerate().skip(1) {
            if mass == 0.0 {
                continue;
            }
            let base = q - 1;
            let room = states - base;
            let kept = po.len().min(room + 1);
            for (a, &pa) in po[..kept].iter().enumerate() {
                next[base + a] += mass * pa;
            }
            if kept < po.len() {
                dropped += mass * po[kept..].iter().sum::<f64>();
            }
        }
        *hit = next[0];
        next[0] = 0.0;
        std::mem::swap(&mut cur, &mut next);
    }
    (first_hit, dropped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::q_runtime;

    #[test]
    fn first_step_hits_with_no_arrival() {
        let h = hitting_time_dp(0.3, 5).unwrap();
        assert!((h.first_hit(1) - (-0.3f64).exp()).abs() < 1e-15);
        assert_eq!(h.first_hit(0), 0.0);
        let tiny = hitting_time_dp(1e-9, 10).unwrap();
        assert!((tiny.conditional_mean - 1.0).abs() < 1e-8);
    }

    #[test]
    fn subcritical_mean_matches_formula() {
        let h = hitting_time_dp(2.0 / 3.0, 10_000).unwrap();
        assert!((h.conditional_mean - 3.0).abs() < 1e-6);
        assert!((h.hit_prob_by_t[10_000] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn agrees_with_runtime_formula() {
        for &c in &[0.5, 1.0, 2.08, 3.0] {
            let h = hitting_time_dp(2.0 * c / 3.0, 10_000).unwrap();
            let q = q_runtime(c).unwrap().to_f64();
            assert!((h.conditional_mean - q).abs() < 1e-3, "c={c}: {} vs {q}", h.conditional_mean);
        }
    }

    #[test]
    fn supercritical_hit_probability_is_queue_root() {
        let lambda = 2.0 * 2f64.ln();
        let h = hitting_time_dp(lambda, 10_000).unwrap();
        assert!((h.hit_prob_by_t[10_000] - 0.5).abs() < 1e-9);
        assert!((h.conditional_mean - 1.0 / (1.0 - lambda * 0.5)).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(hitting_time_dp(0.0, 10).is_err());
        assert!(hitting_time_dp(1.0, 0).is_err());
    }
}
