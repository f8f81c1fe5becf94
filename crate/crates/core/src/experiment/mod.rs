//! Experiment harness behind the command-line tool: sweeps, runtime
//! profiles, limit curves, validation suites and chart rendering.

pub mod config;
pub mod curves;
pub mod meta;
pub mod render;
pub mod sweep;
pub mod validate;

pub use config::{CurvesConfig, KSpec, SweepConfig};
pub use curves::{run_curves, write_curves, CurvePoint};
pub use render::{chart_from_csv, render_svg};
pub use sweep::{run_point, run_sweep, write_records, SweepRecord, SWEEP_HEADER};
pub use validate::{run_suite, CheckResult, Suite};
