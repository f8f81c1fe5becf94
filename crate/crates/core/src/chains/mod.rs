//! Stochastic models of positive unit resolution.
//!
//! * [`queue`]: the single-server queue whose probability of ever emptying
//!   is the limit satisfaction probability of random `k`-Horn formulas.
//! * [`state`]: the clause-count chain that PUR induces on random formulas.
//! * [`dp`]: exact first-passage law of the constant-rate queue.
//! * [`dist`]: probability mass functions and total variation distance.
//! * [`fidelity`]: agreement of the clause-count chain with PUR.

pub mod dist;
pub mod dp;
pub mod fidelity;
pub mod queue;
pub mod state;

pub use dist::{binomial_pmf, empirical_pmf, poisson_pmf, tv_distance};
pub use dp::{hitting_time_dp, HittingTime};
pub use fidelity::{state_chain_fidelity, FidelityPoint};
pub use queue::{estimate_pk, simulate_k_chain, ChainBounds, ChainOutcome, HitEstimate, KChainSpec};
pub use state::{simulate_pur_state_chain, simulate_pur_state_chain_k2, PurStateK2, StateChainTrajectory};
