//! Kinodynamic motion planning by best-first search over sampled control
//! signals, with a state-space partition pruning rule that keeps the search
//! finite while converging to optimal cost as resolution grows.
//!
//! The core entry point is [`plan`]: give it a [`Problem`] (dynamics, free
//! space, goal) and [`PlannerParams`] (resolution and derived scales) and it
//! returns the cheapest signal found together with its trajectory and search
//! counters. [`domains`] builds the stock benchmark problems, [`analysis`]
//! holds the exhaustive oracle and perturbation checks used to validate the
//! planner, and [`harness`] drives resolution sweeps from config files and
//! writes CSV results.
//!
//! ```
//! use glc::{plan, domains};
//!
//! let bench = domains::pendulum();
//! let params = bench.params_for(6);
//! let outcome = plan(&bench.problem, &params).unwrap();
//! assert!(outcome.solved());
//! ```

// Guards are written as negated comparisons on purpose: `!(x > 0.0)` also
// rejects NaN, which the positive form would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod domains;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod partition;
pub mod planner;
pub mod region;
pub mod signal_tree;

pub use dynamics::{
    propagate, propagate_signal, sample_controls, InputSet, SegmentResult, SystemModel, Trajectory,
};
pub use error::GlcError;
pub use partition::{cell_diameter, equivalent, grid_key, GridKey};
pub use planner::{
    check_feasible, glc_clearance, glc_threshold, plan, plan_instrumented, prunes, Heuristic,
    InvariantReport, PlanOutcome, PlannerParams, Problem, SearchStats,
};
pub use region::{halfspace, inside_ball, inside_box, Region};
pub use signal_tree::{NodeId, Signal, SignalNode, SignalTree};
