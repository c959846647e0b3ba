//! Error type shared by the core planning modules.

use std::fmt;

/// Errors produced by signal storage, propagation, partitioning, planning,
/// and analysis routines.
#[derive(Debug, Clone, PartialEq)]
pub enum GlcError {
    /// A node identifier does not belong to the tree it was used with.
    UnknownNode(usize),
    /// Two quantities that must share a dimension do not.
    DimensionMismatch { expected: usize, got: usize, what: &'static str },
    /// A state, control, or cost stopped being finite during integration.
    /// `step` is the zero-based Euler step at which the failure was detected.
    NumericalFailure { step: usize, what: &'static str },
    /// A non-finite coordinate was passed to the partition map.
    NonFiniteState,
    /// Planner parameters failed validation before the search started.
    InvalidParams(String),
    /// Propagation failed mid-search; identifies the expansion that broke.
    PlanAborted { node: usize, control_index: usize, step: usize },
    /// The exhaustive oracle would enumerate more signals than its budget allows.
    EnumerationBudget { requested: f64, limit: f64 },
    /// Two sampled trajectories are not on a common uniform time grid.
    IncompatibleSampling(String),
}

impl fmt::Display for GlcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlcError::UnknownNode(id) => write!(f, "unknown node identifier {id}"),
            GlcError::DimensionMismatch { expected, got, what } => {
                write!(f, "dimension mismatch for {what}: expected {expected}, got {got}")
            }
            GlcError::NumericalFailure { step, what } => {
                write!(f, "numerical failure at integration step {step}: non-finite {what}")
            }
            GlcError::NonFiniteState => write!(f, "non-finite state passed to partition map"),
            GlcError::InvalidParams(msg) => write!(f, "invalid planner parameters: {msg}"),
            GlcError::PlanAborted { node, control_index, step } => write!(
                f,
                "search aborted: propagation from node {node} under control sample {control_index} failed at step {step}"
            ),
            GlcError::EnumerationBudget { requested, limit } => {
                write!(f, "enumeration budget exceeded: {requested:.3e} signals requested, limit {limit:.3e}")
            }
            GlcError::IncompatibleSampling(msg) => write!(f, "incompatible sampling: {msg}"),
        }
    }
}

impl std::error::Error for GlcError {}
