//! Horn clauses, the random formula model, PUR, and its oracles.

mod dimacs;
mod model;
mod oracle;
mod pur;
mod types;

pub use dimacs::{parse_formula, write_formula};
pub use model::{m_from_chat, m_from_raw, sample_formula, ClauseSampler, Density, ModelParams};
pub use oracle::{brute_force_sat, evaluate, ones, weight, witness_assignments, BRUTE_FORCE_MAX_VARS};
pub use pur::{pur, pur_profile, PurOutcome, PurProfile, PurStatus, StageCounts};
pub use types::{HornClause, HornFormula, Variable};
