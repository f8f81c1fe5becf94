//! Experiment configuration: JSON documents with defaults, overridable by
//! command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chains::queue::{DEFAULT_ESCAPE_THRESHOLD, DEFAULT_HORIZON};
use crate::chains::ChainBounds;
use crate::error::{param, Error, Result};

/// Largest `n` for which the uniform model (`k = n`) is run.
pub const UNIFORM_MAX_N: u32 = 20;

/// Clause-length bound of a sweep: a fixed `k`, or `k = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KSpec {
    Fixed(u32),
    Uniform,
}

impl KSpec {
    pub fn resolve(self, n: u32) -> u32 {
        match self {
            KSpec::Fixed(k) => k,
            KSpec::Uniform => n,
        }
    }
}

impl fmt::Display for KSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSpec::Fixed(k) => write!(f, "{k}"),
            KSpec::Uniform => f.write_str("uniform"),
        }
    }
}

impl FromStr for KSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "uniform" => Ok(KSpec::Uniform),
            other => other
                .parse::<u32>()
                .map(KSpec::Fixed)
                .map_err(|_| Error::Parameter(format!("k must be a positive integer or \"uniform\", got {other:?}"))),
        }
    }
}

impl Serialize for KSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            KSpec::Fixed(k) => s.serialize_u32(*k),
            KSpec::Uniform => s.serialize_str("uniform"),
        }
    }
}

impl<'de> Deserialize<'de> for KSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(k) => Ok(KSpec::Fixed(k)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn default_k() -> KSpec {
    KSpec::Fixed(2)
}
fn default_n() -> u32 {
    4000
}
fn default_grid() -> Vec<f64> {
    vec![0.4, 0.6667, 0.9, 1.1, 1.3863, 1.8]
}
fn default_trials() -> u64 {
    2000
}
fn default_seed() -> u64 {
    1
}

/// Parameters of a density sweep (also used by the runtime profile).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_k")]
    pub k: KSpec,
    #[serde(default = "default_n")]
    pub n: u32,
    #[serde(default = "default_grid")]
    pub chat_grid: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials_per_point: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            k: default_k(),
            n: default_n(),
            chat_grid: default_grid(),
            trials_per_point: default_trials(),
            seed: default_seed(),
            workers: default_workers(),
            output_path: None,
        }
    }
}

impl SweepConfig {
    pub fn k(&self) -> u32 {
        self.k.resolve(self.n)
    }

    pub fn validate(&self) -> Result<()> {
        validate_grid(&self.chat_grid)?;
        if self.trials_per_point < 1 {
            return param("trials_per_point must be at least 1");
        }
        if self.workers < 1 {
            return param("workers must be at least 1");
        }
        match self.k {
            KSpec::Fixed(k) if k < 1 || k > self.n => return param(format!("need 1 <= k <= n, got k={k}, n={}", self.n)),
            KSpec::Uniform if self.n > UNIFORM_MAX_N || self.n < 1 => {
                return param(format!("the uniform model runs at 1 <= n <= {UNIFORM_MAX_N}, got n={}", self.n))
            }
            _ => {}
        }
        Ok(())
    }
}

/// Parameters of the analytic and chain curves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvesConfig {
    /// Finite `k >= 3` get chain-estimate columns; 2 and "uniform" are
    /// always present analytically.
    #[serde(default = "default_k_list")]
    pub k_list: Vec<KSpec>,
    #[serde(default = "default_curve_grid")]
    pub chat_grid: Vec<f64>,
    #[serde(default = "default_chain_trials")]
    pub trials_per_point: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_horizon")]
    pub horizon: u64,
    #[serde(default = "default_escape")]
    pub escape_threshold: u64,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

fn default_k_list() -> Vec<KSpec> {
    vec![KSpec::Fixed(2), KSpec::Fixed(3), KSpec::Uniform]
}
fn default_curve_grid() -> Vec<f64> {
    (1..=20).map(|j| j as f64 * 0.1).collect()
}
fn default_chain_trials() -> u64 {
    20_000
}
fn default_horizon() -> u64 {
    DEFAULT_HORIZON
}
fn default_escape() -> u64 {
    DEFAULT_ESCAPE_THRESHOLD
}

impl Default for CurvesConfig {
    fn default() -> Self {
        CurvesConfig {
            k_list: default_k_list(),
            chat_grid: default_curve_grid(),
            trials_per_point: default_chain_trials(),
            seed: default_seed(),
            workers: default_workers(),
            horizon: default_horizon(),
            escape_threshold: default_escape(),
            output_path: None,
        }
    }
}

impl CurvesConfig {
    pub fn bounds(&self) -> ChainBounds {
        ChainBounds { horizon: self.horizon, escape_threshold: self.escape_threshold }
    }

    /// The finite `k >= 3` that get chain columns, sorted and deduplicated.
    pub fn chain_ks(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self
            .k_list
            .iter()
            .filter_map(|k| match k {
                KSpec::Fixed(k) if *k >= 3 => Some(*k),
                _ => None,
            })
            .collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    pub fn validate(&self) -> Result<()> {
        validate_grid(&self.chat_grid)?;
        if self.k_list.iter().any(|k| matches!(k, KSpec::Fixed(k) if *k < 2)) {
            return param("every k in k_list must be at least 2");
        }
        if self.trials_per_point < 1 || self.workers < 1 || self.horizon < 1 || self.escape_threshold < 1 {
            return param("trials_per_point, workers, horizon and escape_threshold must be positive");
        }
        Ok(())
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return param("chat_grid is empty");
    }
    if grid.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return param("chat_grid values must be finite and nonnegative");
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return param("chat_grid must be strictly increasing");
    }
    Ok(())
}

/// Parses a comma-separated list of densities.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parameter(format!("not a number in grid: {t:?}"))))
        .collect()
}

/// Reads a JSON configuration document.
pub fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| ConfigError::Invalid(format!("{}: {e}", path.display())))
}

/// Failure to obtain a configuration.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read configuration: {0}")]
    Io(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}
