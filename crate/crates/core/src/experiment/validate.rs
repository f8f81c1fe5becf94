//! Named cross-module consistency checks, grouped into suites.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::analytics::{
    f2, f2_inverse, mean_field_product, p2, q_runtime, queue_hit_prob, queue_residual, rescale_exact, rho_dist,
};
use crate::chains::{binomial_pmf, estimate_pk, hitting_time_dp, poisson_pmf, state_chain_fidelity, tv_distance, ChainBounds};
use crate::combinatorics::clause_count;
use crate::error::{Error, Result};
use crate::horn::{
    brute_force_sat, evaluate, parse_formula, pur, witness_assignments, write_formula, ClauseSampler, HornFormula,
};
use crate::rng::stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Analytic,
    Chains,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core" => Ok(Suite::Core),
            "analytic" => Ok(Suite::Analytic),
            "chains" => Ok(Suite::Chains),
            "all" => Ok(Suite::All),
            other => Err(Error::Parameter(format!("unknown suite {other:?} (core, analytic, chains, all)"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Core => "core",
            Suite::Analytic => "analytic",
            Suite::Chains => "chains",
            Suite::All => "all",
        })
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub measured: Value,
}

fn check(suite: &str, name: &str, passed: bool, measured: Value) -> CheckResult {
    CheckResult { suite: suite.into(), name: name.into(), passed, measured }
}

/// A random small instance of the oracle corpus.
#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub n: u32,
    pub k: u32,
    pub m: u64,
    pub formula: HornFormula,
}

/// Instance `i` of the oracle corpus below `seed`. The number of variables
/// is uniform on `1..=12` and `k` on `1..=n`. The clause count is uniform
/// on `0..=3 H_k(n)` for even `i`, and on `0..=3 H_k(n)/n` for odd `i`, which
/// keeps half the corpus near the satisfiability threshold.
pub fn corpus_instance(seed: u64, i: u64) -> Result<CorpusInstance> {
    let mut rng = stream(seed, &[i]);
    let n = rng.random_range(1..=12u32);
    let k = rng.random_range(1..=n);
    let h = clause_count(n as u64, k as u64)?;
    let h: u64 = u64::try_from(h).map_err(|_| Error::Capacity("clause universe too large".into()))?;
    let cap = if i.is_multiple_of(2) { 3 * h } else { (3 * h / n as u64).max(1) };
    let m = rng.random_range(0..=cap);
    let formula = ClauseSampler::new(n, k)?.sample_formula(m, &mut rng);
    Ok(CorpusInstance { n, k, m, formula })
}

/// Agreement counts of PUR against exhaustive search and the witness family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleTally {
    pub instances: u64,
    pub satisfiable: u64,
    pub brute_force_disagreements: u64,
    pub witness_family_disagreements: u64,
    pub invalid_witnesses: u64,
}

pub fn oracle_agreement(seed: u64, count: u64) -> Result<OracleTally> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let inst = corpus_instance(seed, i)?;
            let outcome = pur(&inst.formula)?;
            let brute = brute_force_sat(&inst.formula)?;
            let mut family = false;
            for t in witness_assignments(&inst.formula)? {
                if evaluate(&t, &inst.formula)? {
                    family = true;
                    break;
                }
            }
            let witness_ok = match &outcome.witness {
                Some(w) => evaluate(w, &inst.formula)?,
                None => true,
            };
            Ok(OracleTally {
                instances: 1,
                satisfiable: u64::from(brute),
                brute_force_disagreements: u64::from(outcome.is_sat() != brute),
                witness_family_disagreements: u64::from(family != brute),
                invalid_witnesses: u64::from(!witness_ok),
            })
        })
        .try_reduce(OracleTally::default, |a, b| {
            Ok(OracleTally {
                instances: a.instances + b.instances,
                satisfiable: a.satisfiable + b.satisfiable,
                brute_force_disagreements: a.brute_force_disagreements + b.brute_force_disagreements,
                witness_family_disagreements: a.witness_family_disagreements + b.witness_family_disagreements,
                invalid_witnesses: a.invalid_witnesses + b.invalid_witnesses,
            })
        })
}

/// Pearson statistic of `samples` clause draws against the uniform law on
/// all `H_k(n)` clauses, with its degrees of freedom and upper-tail p-value.
pub fn clause_uniformity(n: u32, k: u32, samples: u64, seed: u64) -> Result<(f64, u64, f64)> {
    let h = u64::try_from(clause_count(n as u64, k as u64)?).map_err(|_| Error::Capacity("too many clauses".into()))?;
    let sampler = ClauseSampler::new(n, k)?;
    let mut rng = stream(seed, &[]);
    let mut counts: HashMap<_, u64> = HashMap::new();
    for _ in 0..samples {
        *counts.entry(sampler.sample(&mut rng)).or_default() += 1;
    }
    if counts.len() as u64 > h {
        return Err(Error::Invariant(format!("{} distinct clauses exceed H = {h}", counts.len())));
    }
    let expected = samples as f64 / h as f64;
    let seen: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let unseen = (h - counts.len() as u64) as f64 * expected;
    let stat = seen + unseen;
    let dof = h - 1;
    let law = ChiSquared::new(dof as f64).map_err(|e| Error::Invariant(e.to_string()))?;
    Ok((stat, dof, law.sf(stat)))
}

fn core_checks(seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let tally = oracle_agreement(seed, 10_000)?;
    out.push(check(
        "core",
        "pur_matches_brute_force",
        tally.brute_force_disagreements == 0 && tally.invalid_witnesses == 0,
        serde_json::to_value(tally).unwrap_or(Value::Null),
    ));
    out.push(check(
        "core",
        "witness_family_decides_satisfiability",
        tally.witness_family_disagreements == 0,
        json!({"instances": tally.instances, "disagreements": tally.witness_family_disagreements}),
    ));
    let mut round_trip_failures = 0;
    for i in 0..200 {
        let inst = corpus_instance(seed ^ 0x5eed, i)?;
        if parse_formula(&write_formula(&inst.formula)).ok().as_ref() != Some(&inst.formula) {
            round_trip_failures += 1;
        }
    }
    out.push(check("core", "dimacs_round_trip", round_trip_failures == 0, json!({"instances": 200, "failures": round_trip_failures})));
    for (n, k) in [(3u32, 2u32), (4, 3)] {
        let (stat, dof, p) = clause_uniformity(n, k, 1_000_000, seed)?;
        out.push(check("core", &format!("clause_uniformity_n{n}_k{k}"), p > 1e-3, json!({"chi_square": stat, "dof": dof, "p_value": p})));
    }
    Ok(out)
}

fn analytic_checks() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut worst = 0.0f64;
    for j in 0..400 {
        let c = 0.01 + j as f64 * 0.015;
        worst = worst.max((p2(c)? - queue_hit_prob(2.0 * c / 3.0)?).abs());
    }
    out.push(check("analytic", "p2_equals_queue_root", worst <= 1e-9, json!({"max_abs_diff": worst})));

    let mut worst = 0.0f64;
    for j in 1..=1000 {
        let x = j as f64 / 1001.0;
        worst = worst.max((f2_inverse(f2(x)?)? - x).abs());
    }
    out.push(check("analytic", "f2_round_trip", worst <= 1e-9, json!({"points": 1000, "max_abs_err": worst})));

    let mut worst = 0.0f64;
    for lambda in [1.01, 1.1, 1.3863, 2.0, 5.0] {
        let rho = queue_hit_prob(lambda)?;
        worst = worst.max(queue_residual(lambda, rho));
    }
    out.push(check("analytic", "queue_fixed_point_residual", worst < 1e-10, json!({"max_residual": worst})));

    let mut worst = 0.0f64;
    for c in [0.05, 0.2, 0.5, 1.0, 2.0, 5.0] {
        worst = worst.max((rho_dist(c, 12)?.total() - 1.0).abs());
    }
    let law = rho_dist(1.0, 12)?;
    let head: f64 = law.probabilities[..=4].iter().sum();
    out.push(check("analytic", "rho_normalized", worst <= 1e-12 && head >= 1.0 - 1e-6, json!({"max_abs_err": worst, "mass_k_le_4_at_c1": head})));

    let grid: Vec<f64> = (0..=600).map(|j| j as f64 * 0.01).collect();
    let q: Vec<f64> = grid.iter().map(|&c| q_runtime(c).map(|v| v.to_f64())).collect::<Result<_>>()?;
    let peak = q.iter().enumerate().fold(0, |best, (i, v)| if *v > q[best] { i } else { best });
    let rising = q[..=peak].windows(2).all(|w| w[0] <= w[1]);
    let falling = q[peak..].windows(2).all(|w| w[0] >= w[1]);
    let bracket = (grid[peak.saturating_sub(1)], grid[(peak + 1).min(grid.len() - 1)]);
    out.push(check(
        "analytic",
        "q_unimodal_peak_at_critical_point",
        rising && falling && bracket.0 <= 1.5 && 1.5 <= bracket.1,
        json!({"peak_bracket": [bracket.0, bracket.1], "q0": q[0]}),
    ));

    let mut monotone = true;
    let mut prev = 0.0;
    for j in 1..300 {
        let v = 1.0 - mean_field_product(j as f64 * 0.02, 1e-13)?;
        if j > 1 && v >= prev {
            monotone = false;
        }
        prev = v;
    }
    out.push(check("analytic", "p_inf_decreasing_in_density", monotone, json!({"grid_points": 299})));

    let mut exact = true;
    for (n, k, m) in [(100u32, 2u32, 150u64), (4000, 2, 10_801), (500, 3, 332_837), (20, 20, 123_456)] {
        let chat = rescale_exact(n, k, m)?;
        let h = num_rational::BigRational::from_integer(clause_count(n as u64, k as u64)?.into());
        exact &= chat * h == num_rational::BigRational::from_integer((num_bigint::BigInt::from(m)) * num_bigint::BigInt::from(n));
    }
    out.push(check("analytic", "rescale_exact_identity", exact, json!({"cases": 4})));
    Ok(out)
}

fn chain_checks(seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut diffs = Vec::new();
    for c in [0.5, 1.0, 2.0794, 3.0] {
        let h = hitting_time_dp(2.0 * c / 3.0, 10_000)?;
        let q = q_runtime(c)?.to_f64();
        diffs.push((h.conditional_mean - q).abs());
    }
    let worst = diffs.iter().copied().fold(0.0, f64::max);
    out.push(check("chains", "dp_matches_q_runtime", worst < 1e-3, json!({"max_abs_diff": worst})));

    let mut rows = Vec::new();
    let mut ok = true;
    for chat in [0.5, 1.0, 1.4, 2.0] {
        let bounds = if chat == 1.0 { ChainBounds { horizon: 4_000_000, ..Default::default() } } else { ChainBounds::default() };
        let est = estimate_pk(2, chat, 20_000, bounds, crate::rng::derive_seed(seed, &[2]))?;
        let rho = queue_hit_prob(chat)?;
        let slack = 3.0 * (rho * (1.0 - rho) / est.trials as f64).sqrt() + est.undecided_fraction;
        ok &= (est.probability - rho).abs() <= slack.max(1e-12);
        rows.push(json!({"chat": chat, "estimate": est.probability, "exact": rho, "undecided": est.undecided}));
    }
    out.push(check("chains", "k2_chain_matches_queue_root", ok, Value::Array(rows)));

    let mut worst_ratio = 0.0f64;
    let mut ok = true;
    for n in [10u64, 100, 1000] {
        for p in [0.001, 0.01, 0.1] {
            let d = tv_distance(&binomial_pmf(n, p)?, &poisson_pmf(n as f64 * p)?)?;
            let bound = (n as f64 * p * p).min(1.5 * p);
            ok &= d <= bound;
            worst_ratio = worst_ratio.max(d / bound);
        }
    }
    for (a, b) in [(1.0, 1.1), (0.5, 0.7), (3.0, 3.05)] {
        let d = tv_distance(&poisson_pmf(a)?, &poisson_pmf(b)?)?;
        ok &= d <= (b - a);
        worst_ratio = worst_ratio.max(d / (b - a));
    }
    out.push(check("chains", "total_variation_bounds", ok, json!({"max_distance_over_bound": worst_ratio})));

    let points = state_chain_fidelity(2000, 1.0, 10_000, &[10, 20, 40], crate::rng::derive_seed(seed, &[3]))?;
    let ok = points.iter().all(|p| p.tv < 0.05);
    out.push(check("chains", "state_chain_matches_pur", ok, serde_json::to_value(&points).unwrap_or(Value::Null)));

    let mut ok = true;
    let mut rows = Vec::new();
    for (k, chat) in [(3u32, 1.2), (3, 2.0), (6, 1.1)] {
        let s = crate::rng::derive_seed(seed, &[4, u64::from(k)]);
        let base = estimate_pk(k, chat, 20_000, ChainBounds::default(), s)?;
        let wide = estimate_pk(k, chat, 20_000, ChainBounds { escape_threshold: 200, ..Default::default() }, s)?;
        ok &= (base.probability - wide.probability).abs() < base.half_width_95;
        rows.push(json!({"k": k, "chat": chat, "threshold_100": base.probability, "threshold_200": wide.probability}));
    }
    out.push(check("chains", "escape_threshold_not_binding", ok, Value::Array(rows)));
    Ok(out)
}

/// Runs the checks of `suite`.
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Core | Suite::All) {
        out.extend(core_checks(seed)?);
    }
    if matches!(suite, Suite::Analytic | Suite::All) {
        out.extend(analytic_checks()?);
    }
    if matches!(suite, Suite::Chains | Suite::All) {
        out.extend(chain_checks(seed)?);
    }
    Ok(out)
}
