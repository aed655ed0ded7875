//! Exact cost-driven task offloading for edge-cloud environments.
//!
//! Tasks form a directed graph with per-side computation costs and per-edge
//! four-way communication costs. Offloading picks the subset of tasks to run
//! in the cloud so the total service cost is minimal. Whenever the same-side
//! communication costs of every edge are bounded by the cross-side costs
//! (checked by [`model::check_assumption`]), the cost-increment objective is
//! submodular and [`solver::solve`] finds a certified global optimum in
//! polynomial time via Wolfe's minimum-norm-point algorithm. Without that
//! ordering the problem is NP-hard — [`reductions`] builds the MAX-CUT
//! instances that witness it — and the solver degrades to a feasible
//! heuristic.
//!
//! The crate also ships ground-truth oracles ([`oracle`]), comparison
//! baselines ([`baselines`]), seeded instance generators and serialization
//! ([`datagen`], [`io`]), and a benchmark harness ([`bench`]) behind the
//! `offload` command-line binary. The `examples/` directory has one runnable
//! walkthrough per capability.

pub mod baselines;
pub mod bench;
pub mod cli;
pub mod cost;
pub mod datagen;
pub mod io;
pub mod model;
pub mod oracle;
pub mod reductions;
pub mod solver;

#[cfg(test)]
pub(crate) mod testutil;

pub use cost::{total_cost, CostBreakdown, OffloadObjective};
pub use model::{
    check_assumption, AssumptionReport, EdgeCost, NodeCost, Partition, Pin, TaskGraph,
};
pub use solver::{solve, SolveResult, DEFAULT_EPS};
