//! Sidecar metadata written next to every CSV output.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// How clause counts are obtained from rescaled densities.
pub const ROUNDING: &str = "m = round_half_up(chat * H_k(n) / n), evaluated exactly in rational arithmetic";

#[derive(Clone, Debug, Serialize)]
pub struct ResolvedPoint {
    pub chat: f64,
    pub m: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub seed: u64,
    pub rounding: &'static str,
    pub config: Value,
    pub resolved_m: Option<Vec<ResolvedPoint>>,
}

impl Metadata {
    pub fn new(command: &str, seed: u64, config: Value, resolved_m: Option<Vec<ResolvedPoint>>) -> Self {
        Metadata {
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            rounding: ROUNDING,
            config,
            resolved_m,
        }
    }
}

/// `<out>.meta.json`
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}
