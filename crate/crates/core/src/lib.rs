//! Minimax bin packing with bin size constraints.
//!
//! `T` sets of `B` weighted items are split into `B` groups so that every
//! group takes exactly one item from every set, minimizing the heaviest
//! group. The crate provides an exact two-group DP, an exhaustive oracle for
//! small instances, a greedy with an additive guarantee of `R` (the largest
//! within-set spread), the PARTITION and 3-PARTITION reductions, and a
//! generator, verifier and benchmark harness.

pub mod exact;
pub mod heuristic;
pub mod model;
pub mod reductions;
pub mod toolkit;

pub use exact::{solve_brute_force, solve_dp_b2, ExactError, ExactResult};
pub use heuristic::{
    algorithm1, guarantee_check, local_search_swap, HeuristicConfig, HeuristicResult, SetOrder,
};
pub use model::{evaluate, Assignment, Instance, LoadVector, ModelError, Weight};
