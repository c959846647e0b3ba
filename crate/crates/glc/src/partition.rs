//! Hypercube partition of the state space used by the label-correcting rule.
//!
//! The partition at scale `eta` assigns state `x` the integer key
//! `floor(eta * x)` taken componentwise; two states are equivalent when their
//! keys agree. Each cell is an axis-aligned cube of side `1/eta`, so states in
//! one cell are at most `sqrt(n)/eta` apart.

use crate::error::GlcError;

/// Integer cell coordinates of one hypercube.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridKey(pub Vec<i64>);

/// Maps a state to its cell at scale `eta`.
///
/// Exact integer coordinates land in the cell they open: `floor` applies
/// directly to `eta * x`, so a boundary value belongs to the upper cell.
pub fn grid_key(state: &[f64], eta: f64) -> Result<GridKey, GlcError> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(GlcError::InvalidParams(format!("eta must be positive and finite, got {eta}")));
    }
    let mut coords = Vec::with_capacity(state.len());
    for &x in state {
        if !x.is_finite() {
            return Err(GlcError::NonFiniteState);
        }
        coords.push((eta * x).floor() as i64);
    }
    Ok(GridKey(coords))
}

/// Whether two states share a cell at scale `eta`.
pub fn equivalent(a: &[f64], b: &[f64], eta: f64) -> Result<bool, GlcError> {
    Ok(grid_key(a, eta)? == grid_key(b, eta)?)
}

/// Radius bound of one cell: states with equal keys differ by less than this
/// in Euclidean norm.
pub fn cell_diameter(state_dim: usize, eta: f64) -> f64 {
    (state_dim as f64).sqrt() / eta
}
