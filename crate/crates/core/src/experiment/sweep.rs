//! Density sweeps: satisfaction probability and PUR stage counts.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SweepConfig;
use crate::analytics::{lambda_k_f64, q_runtime};
use crate::error::{Error, Result};
use crate::horn::{m_from_chat, pur, ClauseSampler};
use crate::rng::stream;

/// Column order of the sweep CSV.
pub const SWEEP_HEADER: [&str; 10] =
    ["k", "n", "chat", "m", "trials", "sat_count", "sat_fraction", "mean_iterations_sat", "stddev_iterations_sat", "wall_ms"];

/// Written where a statistic is undefined.
pub const NA: &str = "NA";

/// Aggregate of one grid point. Iterations are PUR stages: assignments
/// plus the final check, so an empty formula counts one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub k: u32,
    pub n: u32,
    pub chat: f64,
    pub m: u64,
    pub trials: u64,
    pub sat_count: u64,
    pub sat_fraction: f64,
    pub mean_iterations_sat: Option<f64>,
    pub stddev_iterations_sat: Option<f64>,
    pub wall_ms: u64,
}

impl SweepRecord {
    /// Normal-approximation 95% half-width of `sat_fraction`.
    pub fn half_width_95(&self) -> f64 {
        let p = self.sat_fraction;
        1.96 * (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    fn fields(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map_or_else(|| NA.to_string(), |x| x.to_string());
        vec![
            self.k.to_string(),
            self.n.to_string(),
            self.chat.to_string(),
            self.m.to_string(),
            self.trials.to_string(),
            self.sat_count.to_string(),
            self.sat_fraction.to_string(),
            opt(self.mean_iterations_sat),
            opt(self.stddev_iterations_sat),
            self.wall_ms.to_string(),
        ]
    }
}

/// Order-independent trial counters.
#[derive(Clone, Copy, Default)]
struct Tally {
    sat: u64,
    stages: u64,
    stages_sq: u128,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally { sat: self.sat + o.sat, stages: self.stages + o.stages, stages_sq: self.stages_sq + o.stages_sq }
    }
}

/// Runs `trials` formulas at one density. Trial `t` of grid point `g` draws
/// from the stream `(seed, [g, t])`.
pub fn run_point(k: u32, n: u32, chat: f64, trials: u64, seed: u64, g: u64) -> Result<SweepRecord> {
    let start = Instant::now();
    let m = m_from_chat(n, k, chat)?;
    let sampler = ClauseSampler::new(n, k)?;
    let tally = (0..trials)
        .into_par_iter()
        .map(|t| {
            let formula = sampler.sample_formula(m, &mut stream(seed, &[g, t]));
            let outcome = pur(&formula)?;
            Ok(if outcome.is_sat() {
                let s = outcome.stages() as u64;
                Tally { sat: 1, stages: s, stages_sq: u128::from(s) * u128::from(s) }
            } else {
                Tally::default()
            })
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    let (mean, sd) = moments(tally);
    Ok(SweepRecord {
        k,
        n,
        chat,
        m,
        trials,
        sat_count: tally.sat,
        sat_fraction: tally.sat as f64 / trials as f64,
        mean_iterations_sat: mean,
        stddev_iterations_sat: sd,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

/// Mean and sample standard deviation, computed from exact integer sums.
fn moments(t: Tally) -> (Option<f64>, Option<f64>) {
    if t.sat == 0 {
        return (None, None);
    }
    let n = t.sat as f64;
    let mean = t.stages as f64 / n;
    if t.sat < 2 {
        return (Some(mean), None);
    }
    // sum (x - mean)^2 = sum x^2 - (sum x)^2 / n, with the numerator exact.
    let num = t.stages_sq * u128::from(t.sat) - u128::from(t.stages) * u128::from(t.stages);
    let var = num as f64 / (n * (n - 1.0));
    (Some(mean), Some(var.sqrt()))
}

/// Runs every grid point of `config` on a pool of `config.workers` threads.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let k = config.k();
    with_workers(config.workers, || {
        config
            .chat_grid
            .iter()
            .enumerate()
            .map(|(g, &chat)| run_point(k, config.n, chat, config.trials_per_point, config.seed, g as u64))
            .collect()
    })
}

/// Runs `f` on a dedicated rayon pool.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Invariant(format!("cannot start worker pool: {e}")))?;
    pool.install(f)
}

/// Analytic stage-count limit for the runtime profile: `q(chat / lambda_k)`
/// for `k = 2`, `None` otherwise.
pub fn q_analytic(k: u32, chat: f64) -> Result<Option<String>> {
    if k != 2 {
        return Ok(None);
    }
    let c = chat / lambda_k_f64(2)?;
    Ok(Some(match q_runtime(c)?.finite() {
        Some(q) => q.to_string(),
        None => "inf".to_string(),
    }))
}

/// Writes records as CSV; with `with_q` a `q_analytic` column is appended.
pub fn write_records<W: Write>(out: W, records: &[SweepRecord], with_q: bool) -> Result<(), WriteError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = SWEEP_HEADER.to_vec();
    if with_q {
        header.push("q_analytic");
    }
    w.write_record(&header)?;
    for r in records {
        let mut row = r.fields();
        if with_q {
            row.push(q_analytic(r.k, r.chat).map_err(WriteError::Compute)?.unwrap_or_else(|| NA.to_string()));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Failure while emitting an output file.
#[derive(Debug, thiserror::Error)]
pub enum WriteError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Compute(Error),
}
