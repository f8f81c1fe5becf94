//! The queue whose probability of ever emptying is the limit satisfaction
//! probability of random `k`-Horn formulas at rescaled density `chat`:
//!
//! `Q_0 = 1`, `Q_{i+1} = Q_i ⊖ 1 + Po(mu_i)`, with `mu_0 = chat` and
//! `mu_i = chat * S_{k-2}^{i-1}` for `i >= 1`.
//!
//! For `k = 2` every `mu_i` equals `chat`. For larger `k` the arrival means
//! grow polynomially, so a run either empties early or escapes.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::queue_hit_prob;
use crate::error::{param, Error, Result};
use crate::rng::stream;

/// Default number of steps after which a run is undecided.
pub const DEFAULT_HORIZON: u64 = 10_000;
/// Default queue length at which a supercritical run escapes.
pub const DEFAULT_ESCAPE_THRESHOLD: u64 = 100;
/// Bound on the probability that an escaped run would still have emptied.
pub const ESCAPE_TOL: f64 = 1e-10;
/// Largest tolerated fraction of undecided runs in [`estimate_pk`].
pub const UNDECIDED_LIMIT: f64 = 1e-3;

/// Arrival means are capped here; `P(Po(1e12) < 1e6)` is below f64
/// resolution, so the cap cannot change an outcome.
const MEAN_CAP: f64 = 1e12;

/// Stopping rule of a chain run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainBounds {
    pub horizon: u64,
    pub escape_threshold: u64,
}

impl Default for ChainBounds {
    fn default() -> Self {
        ChainBounds { horizon: DEFAULT_HORIZON, escape_threshold: DEFAULT_ESCAPE_THRESHOLD }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KChainSpec {
    pub k: u32,
    pub chat: f64,
    pub horizon: u64,
    pub escape_threshold: u64,
}

impl KChainSpec {
    pub fn new(k: u32, chat: f64, bounds: ChainBounds) -> Result<Self> {
        let spec = KChainSpec { k, chat, horizon: bounds.horizon, escape_threshold: bounds.escape_threshold };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return param(format!("chain needs k >= 2, got {}", self.k));
        }
        if !(self.chat >= 0.0) || !self.chat.is_finite() {
            return param(format!("density must be finite and nonnegative, got {}", self.chat));
        }
        if self.horizon < 1 || self.escape_threshold < 1 {
            return param("horizon and escape threshold must be positive");
        }
        Ok(())
    }

    /// Mean of the arrivals that produce `Q_{i+1}`.
    pub fn arrival_mean(&self, i: u64) -> f64 {
        if i == 0 {
            return self.chat;
        }
        let (n, j) = (i - 1, u64::from(self.k - 2));
        // S_j^n accumulated in floating point; exact while below 2^53.
        let mut term = 1.0;
        let mut sum = 1.0;
        for l in 1..=j.min(n) {
            term = term * (n - l + 1) as f64 / l as f64;
            sum += term;
        }
        (self.chat * sum).min(MEAN_CAP)
    }

    /// Precomputes the per-step arrival laws and escape levels.
    pub fn arrivals(&self) -> Result<Arrivals> {
        self.validate()?;
        let mut steps = Vec::new();
        let mut last_mean = f64::NAN;
        for i in 0..self.horizon {
            let mean = self.arrival_mean(i);
            if i >= 2 && mean == last_mean {
                // From step 1 on the means either grow strictly or stay
                // constant forever (k = 2, zero density, or the cap).
                break;
            }
            last_mean = mean;
            let law = if mean > 0.0 {
                Some(Poisson::new(mean).map_err(|e| Error::Invariant(format!("Poisson({mean}): {e}")))?)
            } else {
                None
            };
            steps.push(Step { law, escape_at: self.escape_level(mean) });
        }
        Ok(Arrivals { horizon: self.horizon, steps })
    }

    /// Queue length from which a run facing arrival mean `mean` (and no
    /// smaller means afterwards) empties with probability below
    /// [`ESCAPE_TOL`]. That probability is at most `rho(mean)^q`.
    fn escape_level(&self, mean: f64) -> u64 {
        if mean >= 2.0 {
            // rho(2)^100 < 1e-69.
            return self.escape_threshold;
        }
        if mean <= 1.0 {
            return u64::MAX;
        }
        let rho = queue_hit_prob(mean).unwrap_or(1.0);
        if rho >= 1.0 {
            return u64::MAX;
        }
        let needed = (ESCAPE_TOL.ln() / rho.ln()).ceil() as u64;
        needed.max(self.escape_threshold)
    }
}

#[derive(Clone, Debug)]
struct Step {
    law: Option<Poisson<f64>>,
    escape_at: u64,
}

/// Arrival laws of a [`KChainSpec`], shared by all runs of an estimate.
#[derive(Clone, Debug)]
pub struct Arrivals {
    horizon: u64,
    steps: Vec<Step>,
}

impl Arrivals {
    fn step(&self, i: u64) -> &Step {
        let last = self.steps.len() - 1;
        &self.steps[(i as usize).min(last)]
    }

    pub fn simulate<R: Rng + ?Sized>(&self, rng: &mut R) -> ChainOutcome {
        let mut q: u64 = 1;
        for i in 0..self.horizon {
            let step = self.step(i);
            let arrivals = step.law.as_ref().map_or(0, |law| law.sample(rng) as u64);
            q = q.saturating_sub(1).saturating_add(arrivals);
            if q == 0 {
                return ChainOutcome::Hit(i + 1);
            }
            if q >= self.step(i + 1).escape_at {
                return ChainOutcome::Escaped(i + 1);
            }
        }
        ChainOutcome::Undecided
    }
}

/// How a chain run ended, with the step index at which it stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainOutcome {
    Hit(u64),
    Escaped(u64),
    Undecided,
}

impl ChainOutcome {
    pub fn hit_zero_at(self) -> Option<u64> {
        match self {
            ChainOutcome::Hit(i) => Some(i),
            _ => None,
        }
    }

    pub fn escaped(self) -> bool {
        matches!(self, ChainOutcome::Escaped(_))
    }
}

/// Runs one chain. Callers running many trials should reuse
/// [`KChainSpec::arrivals`].
pub fn simulate_k_chain<R: Rng + ?Sized>(spec: &KChainSpec, rng: &mut R) -> Result<ChainOutcome> {
    Ok(spec.arrivals()?.simulate(rng))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HitEstimate {
    pub k: u32,
    pub chat: f64,
    pub probability: f64,
    pub trials: u64,
    pub hits: u64,
    pub escaped: u64,
    pub undecided: u64,
    /// Normal-approximation 95% half-width.
    pub half_width_95: f64,
    pub undecided_fraction: f64,
}

impl HitEstimate {
    pub fn standard_error(&self) -> f64 {
        (self.probability * (1.0 - self.probability) / self.trials as f64).sqrt()
    }
}

/// Monte Carlo estimate of the probability that the chain empties; trial
/// `t` uses the stream `(seed, [t])`.
pub fn estimate_pk(k: u32, chat: f64, trials: u64, bounds: ChainBounds, seed: u64) -> Result<HitEstimate> {
    if trials < 1 {
        return param("trials must be at least 1");
    }
    let spec = KChainSpec::new(k, chat, bounds)?;
    let arrivals = spec.arrivals()?;
    let (hits, escaped, undecided) = (0..trials)
        .into_par_iter()
        .map(|t| match arrivals.simulate(&mut stream(seed, &[t])) {
            ChainOutcome::Hit(_) => (1u64, 0u64, 0u64),
            ChainOutcome::Escaped(_) => (0, 1, 0),
            ChainOutcome::Undecided => (0, 0, 1),
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    if undecided as f64 > UNDECIDED_LIMIT * trials as f64 {
        return Err(Error::Undecided { undecided, trials });
    }
    let probability = hits as f64 / trials as f64;
    let half_width_95 = 1.96 * (probability * (1.0 - probability) / trials as f64).sqrt();
    Ok(HitEstimate {
        k,
        chat,
        probability,
        trials,
        hits,
        escaped,
        undecided,
        half_width_95,
        undecided_fraction: undecided as f64 / trials as f64,
    })
}
