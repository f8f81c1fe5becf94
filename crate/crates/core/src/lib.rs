//! Random at-most-k Horn satisfiability.
//!
//! * [`horn`]: clauses, the random model, the PUR decider and its oracles.
//! * [`analytics`]: limit laws for the satisfaction probability and for PUR's
//!   running time, and the rescaled density.
//! * [`chains`]: queueing-chain and clause-count-chain models of PUR.
//! * [`experiment`]: the sweep/curve/validate/render harness behind the CLI.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod chains;
pub mod combinatorics;
mod error;
pub mod experiment;
pub mod horn;
pub mod rng;

pub use error::{Error, Result};
