//! Agreement between the clause-count chain and instrumented PUR.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dist::{empirical_pmf, tv_distance};
use super::state::simulate_pur_state_chain;
use crate::error::Result;
use crate::horn::{m_from_raw, pur_profile, ClauseSampler};
use crate::rng::stream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityPoint {
    /// Number of assignments made; the stage is `t = n - offset`.
    pub offset: u32,
    pub chain_mean: f64,
    pub pur_mean: f64,
    pub tv: f64,
}

/// Compares the law of `P_1` after each of `offsets` assignments between the
/// `k = 2` chain and PUR (continued past its verdict) on formulas with
/// `round(c n)` clauses, over `trials` samples each.
pub fn state_chain_fidelity(n: u32, c: f64, trials: u64, offsets: &[u32], seed: u64) -> Result<Vec<FidelityPoint>> {
    let m = m_from_raw(n, 2, c)?;
    let depth = offsets.iter().copied().max().unwrap_or(0);
    let sampler = ClauseSampler::new(n, 2)?;

    let chain: Vec<Vec<u64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let traj = simulate_pur_state_chain(2, n, m, Some(depth), &mut stream(seed, &[0, t]))?;
            Ok(offsets.iter().map(|&j| traj.states[j as usize].p1()).collect())
        })
        .collect::<Result<_>>()?;
    let pur: Vec<Vec<u64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let formula = sampler.sample_formula(m, &mut stream(seed, &[1, t]));
            let profile = pur_profile(&formula, Some(depth as usize))?;
            Ok(offsets.iter().map(|&j| profile.stages.get(j as usize).map_or(0, |s| s.p1())).collect())
        })
        .collect::<Result<_>>()?;

    offsets
        .iter()
        .enumerate()
        .map(|(slot, &offset)| {
            let a: Vec<u64> = chain.iter().map(|row| row[slot]).collect();
            let b: Vec<u64> = pur.iter().map(|row| row[slot]).collect();
            let mean = |v: &[u64]| v.iter().sum::<u64>() as f64 / v.len().max(1) as f64;
            Ok(FidelityPoint {
                offset,
                chain_mean: mean(&a),
                pur_mean: mean(&b),
                tv: tv_distance(&empirical_pmf(&a), &empirical_pmf(&b))?,
            })
        })
        .collect()
}
