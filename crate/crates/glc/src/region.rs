//! State-space regions built from box, ball, and halfspace primitives.
//!
//! Primitives test strict inequalities, so every composed region used as free
//! space or goal set is (up to boundaries of unions) an open set. Each shape
//! constrains the leading coordinates matching its parameter length and leaves
//! trailing coordinates free, which is how position-only goals are expressed
//! for second-order systems.

/// A composable region of the state space.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// The whole space.
    All,
    /// Open axis-aligned box over the leading `lower.len()` coordinates.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// Open Euclidean ball over the leading `center.len()` coordinates.
    Ball { center: Vec<f64>, radius: f64 },
    /// Open halfspace `normal . x < offset` over the leading `normal.len()` coordinates.
    Halfspace { normal: Vec<f64>, offset: f64 },
    Union(Vec<Region>),
    Intersection(Vec<Region>),
    Complement(std::boxed::Box<Region>),
}

/// Open box over the leading coordinates.
pub fn inside_box(lower: Vec<f64>, upper: Vec<f64>) -> Region {
    assert_eq!(lower.len(), upper.len(), "box bounds must share a dimension");
    Region::Box { lower, upper }
}

/// Open ball over the leading coordinates.
pub fn inside_ball(center: Vec<f64>, radius: f64) -> Region {
    assert!(radius > 0.0, "ball radius must be positive");
    Region::Ball { center, radius }
}

/// Open halfspace `normal . x < offset`.
pub fn halfspace(normal: Vec<f64>, offset: f64) -> Region {
    assert!(normal.iter().any(|v| *v != 0.0), "halfspace normal must be nonzero");
    Region::Halfspace { normal, offset }
}

impl Region {
    pub fn complement(self) -> Region {
        Region::Complement(std::boxed::Box::new(self))
    }

    pub fn union(parts: Vec<Region>) -> Region {
        Region::Union(parts)
    }

    pub fn intersection(parts: Vec<Region>) -> Region {
        Region::Intersection(parts)
    }

    /// Strict membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Region::All => true,
            Region::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .zip(x)
                .all(|((lo, hi), xi)| *lo < *xi && *xi < *hi),
            Region::Ball { center, radius } => {
                crate::dynamics::dist(&x[..center.len()], center) < *radius
            }
            Region::Halfspace { normal, offset } => {
                normal.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() < *offset
            }
            Region::Union(parts) => parts.iter().any(|p| p.contains(x)),
            Region::Intersection(parts) => parts.iter().all(|p| p.contains(x)),
            Region::Complement(inner) => !inner.contains(x),
        }
    }

    /// Signed clearance: positive strictly inside, negative strictly outside.
    ///
    /// For primitives, complements, and intersections the inside value is the
    /// exact Euclidean distance to the region's complement, so
    /// `clearance(x) >= eps` certifies that the open `eps`-ball around `x`
    /// stays inside. Unions report the maximum over members, which can
    /// understate the true clearance where members overlap; the certificate
    /// direction is preserved.
    pub fn clearance(&self, x: &[f64]) -> f64 {
        match self {
            Region::All => f64::INFINITY,
            Region::Box { lower, upper } => {
                let mut inside_margin = f64::INFINITY;
                let mut outside_sq = 0.0;
                for ((lo, hi), xi) in lower.iter().zip(upper).zip(x) {
                    let margin = (xi - lo).min(hi - xi);
                    if margin < 0.0 {
                        let excess = (lo - xi).max(xi - hi);
                        outside_sq += excess * excess;
                    }
                    inside_margin = inside_margin.min(margin);
                }
                if outside_sq > 0.0 {
                    -outside_sq.sqrt()
                } else {
                    inside_margin
                }
            }
            Region::Ball { center, radius } => {
                radius - crate::dynamics::dist(&x[..center.len()], center)
            }
            Region::Halfspace { normal, offset } => {
                let dot: f64 = normal.iter().zip(x).map(|(a, b)| a * b).sum();
                (offset - dot) / crate::dynamics::norm(normal)
            }
            Region::Union(parts) => parts
                .iter()
                .map(|p| p.clearance(x))
                .fold(f64::NEG_INFINITY, f64::max),
            Region::Intersection(parts) => parts
                .iter()
                .map(|p| p.clearance(x))
                .fold(f64::INFINITY, f64::min),
            Region::Complement(inner) => -inner.clearance(x),
        }
    }
}
