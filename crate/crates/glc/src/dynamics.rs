//! System models, deterministic input sampling, and fixed-step Euler
//! propagation of piecewise-constant control segments.

use std::sync::Arc;

use crate::error::GlcError;
use crate::signal_tree::Signal;

/// Admissible input set descriptor.
///
/// `Interval` is an axis-aligned box in R^m, `Circle` the set `|u| = radius`
/// in R^2, and `Ball` the set `|u| <= radius` in R^3.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSet {
    Interval { lower: Vec<f64>, upper: Vec<f64> },
    Circle { radius: f64 },
    Ball { radius: f64 },
}

impl InputSet {
    pub fn dim(&self) -> usize {
        match self {
            InputSet::Interval { lower, .. } => lower.len(),
            InputSet::Circle { .. } => 2,
            InputSet::Ball { .. } => 3,
        }
    }

    /// Membership up to a small numerical slack on curved boundaries.
    pub fn contains(&self, u: &[f64]) -> bool {
        match self {
            InputSet::Interval { lower, upper } => {
                u.len() == lower.len()
                    && u.iter()
                        .zip(lower.iter().zip(upper))
                        .all(|(ui, (lo, hi))| *lo <= *ui && *ui <= *hi)
            }
            InputSet::Circle { radius } => {
                u.len() == 2 && (norm(u) - radius).abs() <= 1e-9 * radius.max(1.0)
            }
            InputSet::Ball { radius } => u.len() == 3 && norm(u) <= radius * (1.0 + 1e-12),
        }
    }
}

type DynamicsFn = dyn Fn(&[f64], &[f64], &mut [f64]) + Send + Sync;
type CostRateFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;

/// Control system `x' = f(x, u)` with running cost rate `g(x, u)` and the
/// constants used by pruning thresholds and analysis bounds.
///
/// All fields are immutable after construction; the model is safe to share
/// across threads.
#[derive(Clone)]
pub struct SystemModel {
    pub state_dim: usize,
    pub input_dim: usize,
    pub omega: InputSet,
    /// Lipschitz constant of `f` in the state, over the operating region.
    pub lipschitz_f: f64,
    /// Joint Lipschitz constant of `g` in (state, input), over the operating region.
    pub lipschitz_g: f64,
    /// Speed bound: `|f(x, u)| <= speed_bound` over the operating region.
    pub speed_bound: f64,
    /// Bound on `|u|` over the input set, used by the signal metric.
    pub input_bound: f64,
    dynamics: Arc<DynamicsFn>,
    cost_rate: Arc<CostRateFn>,
}

impl std::fmt::Debug for SystemModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SystemModel")
            .field("state_dim", &self.state_dim)
            .field("input_dim", &self.input_dim)
            .field("omega", &self.omega)
            .field("lipschitz_f", &self.lipschitz_f)
            .field("lipschitz_g", &self.lipschitz_g)
            .field("speed_bound", &self.speed_bound)
            .field("input_bound", &self.input_bound)
            .finish()
    }
}

impl SystemModel {
    /// Builds a model; panics if `input_dim` disagrees with the input set.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        state_dim: usize,
        omega: InputSet,
        lipschitz_f: f64,
        lipschitz_g: f64,
        speed_bound: f64,
        input_bound: f64,
        dynamics: impl Fn(&[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
        cost_rate: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let input_dim = omega.dim();
        assert!(state_dim > 0, "state dimension must be positive");
        assert!(lipschitz_f >= 0.0 && lipschitz_g >= 0.0);
        SystemModel {
            state_dim,
            input_dim,
            omega,
            lipschitz_f,
            lipschitz_g,
            speed_bound,
            input_bound,
            dynamics: Arc::new(dynamics),
            cost_rate: Arc::new(cost_rate),
        }
    }

    pub fn derivative(&self, x: &[f64], u: &[f64], dx: &mut [f64]) {
        (self.dynamics)(x, u, dx);
    }

    pub fn cost_rate(&self, x: &[f64], u: &[f64]) -> f64 {
        (self.cost_rate)(x, u)
    }
}

/// States visited while integrating one constant-control segment.
///
/// Holds `num_steps() + 1` uniformly spaced samples including both endpoints,
/// stored row-major.
#[derive(Debug, Clone)]
pub struct SegmentResult {
    n: usize,
    step: f64,
    states: Vec<f64>,
    pub segment_cost: f64,
}

impl SegmentResult {
    pub fn num_steps(&self) -> usize {
        self.states.len() / self.n - 1
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn state_at(&self, k: usize) -> &[f64] {
        &self.states[k * self.n..(k + 1) * self.n]
    }

    pub fn terminal_state(&self) -> &[f64] {
        self.state_at(self.num_steps())
    }

    /// `(time, state)` pairs with times relative to the segment start.
    pub fn samples(&self) -> impl Iterator<Item = (f64, &[f64])> {
        let step = self.step;
        self.states.chunks_exact(self.n).enumerate().map(move |(k, s)| (k as f64 * step, s))
    }
}

/// Integrates `x' = f(x, u)` for duration `tau` under constant `u` with the
/// explicit Euler rule, using `N = ceil(tau / delta_max)` steps of size
/// `tau / N`. The running cost is accumulated with the left-endpoint rule, so
/// cost and state use the same sample points.
pub fn propagate(
    system: &SystemModel,
    x0: &[f64],
    u: &[f64],
    tau: f64,
    delta_max: f64,
) -> Result<SegmentResult, GlcError> {
    let n = system.state_dim;
    if x0.len() != n {
        return Err(GlcError::DimensionMismatch { expected: n, got: x0.len(), what: "state" });
    }
    if u.len() != system.input_dim {
        return Err(GlcError::DimensionMismatch {
            expected: system.input_dim,
            got: u.len(),
            what: "control",
        });
    }
    if !(tau > 0.0) || !(delta_max > 0.0) {
        return Err(GlcError::InvalidParams("tau and delta_max must be positive".into()));
    }
    debug_assert!(system.omega.contains(u), "control outside the admissible set");

    let num_steps = (tau / delta_max).ceil() as usize;
    let num_steps = num_steps.max(1);
    let dt = tau / num_steps as f64;

    let mut states = Vec::with_capacity((num_steps + 1) * n);
    states.extend_from_slice(x0);
    let mut x = x0.to_vec();
    let mut dx = vec![0.0; n];
    let mut cost = 0.0;
    for k in 0..num_steps {
        (system.dynamics)(&x, u, &mut dx);
        if !dx.iter().all(|v| v.is_finite()) {
            return Err(GlcError::NumericalFailure { step: k, what: "state derivative" });
        }
        let rate = (system.cost_rate)(&x, u);
        if !rate.is_finite() {
            return Err(GlcError::NumericalFailure { step: k, what: "cost rate" });
        }
        cost += dt * rate;
        for i in 0..n {
            x[i] += dt * dx[i];
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(GlcError::NumericalFailure { step: k, what: "state" });
        }
        states.extend_from_slice(&x);
    }
    Ok(SegmentResult { n, step: dt, states, segment_cost: cost })
}

/// A full trajectory produced by integrating a signal segment by segment.
///
/// Sample times use the closed form `segment_index * segment_duration +
/// step_index * step`, so re-propagating the same signal reproduces the
/// trajectory bit for bit.
#[derive(Debug, Clone)]
pub struct Trajectory {
    n: usize,
    /// Euler steps per segment.
    steps_per_segment: usize,
    step: f64,
    times: Vec<f64>,
    states: Vec<f64>,
    pub cost: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn steps_per_segment(&self) -> usize {
        self.steps_per_segment
    }

    pub fn time_at(&self, k: usize) -> f64 {
        self.times[k]
    }

    pub fn state_at(&self, k: usize) -> &[f64] {
        &self.states[k * self.n..(k + 1) * self.n]
    }

    pub fn terminal_state(&self) -> &[f64] {
        self.state_at(self.len() - 1)
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().expect("trajectory has at least the initial sample")
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.times.iter().copied().zip(self.states.chunks_exact(self.n))
    }

    /// Segment index owning sample `k` (boundaries belong to the segment that
    /// starts there; the final sample belongs to the last segment).
    pub fn segment_of(&self, k: usize, depth: usize) -> usize {
        if depth == 0 {
            return 0;
        }
        (k / self.steps_per_segment).min(depth - 1)
    }
}

/// Integrates a whole signal from `x0`, chaining [`propagate`] across the
/// segments. An empty signal yields the single sample `(0, x0)` at zero cost.
pub fn propagate_signal(
    system: &SystemModel,
    x0: &[f64],
    signal: &Signal,
    delta_max: f64,
) -> Result<Trajectory, GlcError> {
    let n = system.state_dim;
    if x0.len() != n {
        return Err(GlcError::DimensionMismatch { expected: n, got: x0.len(), what: "state" });
    }
    let tau = signal.segment_duration;
    let mut times = vec![0.0];
    let mut states = x0.to_vec();
    let mut cost = 0.0;
    let mut current = x0.to_vec();
    let mut steps_per_segment = 0;
    let mut step = 0.0;
    for (seg_idx, u) in signal.controls.iter().enumerate() {
        let seg = propagate(system, &current, u, tau, delta_max)?;
        steps_per_segment = seg.num_steps();
        step = seg.step();
        cost += seg.segment_cost;
        let base = seg_idx as f64 * tau;
        for (t, s) in seg.samples().skip(1) {
            let is_terminal = times.len() % steps_per_segment == 0;
            // Terminal samples get the exact boundary time (k+1)*tau.
            if is_terminal {
                times.push((seg_idx + 1) as f64 * tau);
            } else {
                times.push(base + t);
            }
            states.extend_from_slice(s);
        }
        current.copy_from_slice(seg.terminal_state());
    }
    Ok(Trajectory { n, steps_per_segment, step, times, states, cost })
}

/// Deterministic sample of exactly `R^m` admissible controls.
///
/// Intervals use the endpoint-inclusive uniform product grid (midpoints when
/// `R = 1`), the circle uses `R^2` uniformly spaced angles, and the ball uses
/// an `R^3` product grid in spherical coordinates whose points all lie inside
/// the ball, so no culling or padding is required.
pub fn sample_controls(system: &SystemModel, resolution: u32) -> Result<Vec<Vec<f64>>, GlcError> {
    if resolution == 0 {
        return Err(GlcError::InvalidParams("resolution must be at least 1".into()));
    }
    let r = resolution as usize;
    match &system.omega {
        InputSet::Interval { lower, upper } => {
            let m = lower.len();
            if upper.len() != m || m == 0 {
                return Err(GlcError::DimensionMismatch {
                    expected: m.max(1),
                    got: upper.len(),
                    what: "interval bounds",
                });
            }
            let axis = |lo: f64, hi: f64| -> Vec<f64> {
                if r == 1 {
                    vec![0.5 * (lo + hi)]
                } else {
                    // Lerp form keeps both endpoints exact.
                    (0..r)
                        .map(|i| {
                            let t = i as f64 / (r - 1) as f64;
                            lo * (1.0 - t) + hi * t
                        })
                        .collect()
                }
            };
            let grids: Vec<Vec<f64>> = lower.iter().zip(upper).map(|(&lo, &hi)| axis(lo, hi)).collect();
            let total = r.pow(m as u32);
            let mut out = Vec::with_capacity(total);
            for flat in 0..total {
                let mut u = Vec::with_capacity(m);
                let mut rem = flat;
                for grid in grids.iter().rev() {
                    u.push(grid[rem % r]);
                    rem /= r;
                }
                u.reverse();
                out.push(u);
            }
            Ok(out)
        }
        InputSet::Circle { radius } => {
            let count = r * r;
            Ok((0..count)
                .map(|k| {
                    let angle = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                    vec![radius * angle.cos(), radius * angle.sin()]
                })
                .collect())
        }
        InputSet::Ball { radius } => {
            let pi = std::f64::consts::PI;
            let mut out = Vec::with_capacity(r * r * r);
            for i in 0..r {
                // Radii exclude zero so that all R^3 points stay distinct.
                let rho = radius * (i + 1) as f64 / r as f64;
                for j in 0..r {
                    let phi = pi * (j as f64 + 0.5) / r as f64;
                    for k in 0..r {
                        let theta = 2.0 * pi * k as f64 / r as f64;
                        out.push(vec![
                            rho * phi.sin() * theta.cos(),
                            rho * phi.sin() * theta.sin(),
                            rho * phi.cos(),
                        ]);
                    }
                }
            }
            Ok(out)
        }
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_integrator() -> SystemModel {
        SystemModel::new(
            2,
            InputSet::Circle { radius: 1.0 },
            0.0,
            0.0,
            1.0,
            1.0,
            |_x, u, dx| dx.copy_from_slice(u),
            |_x, _u| 1.0,
        )
    }

    fn pendulum() -> SystemModel {
        SystemModel::new(
            2,
            InputSet::Interval { lower: vec![-0.2], upper: vec![0.2] },
            1.0,
            0.0,
            2.6,
            0.2,
            |x, u, dx| {
                dx[0] = x[1];
                dx[1] = u[0] - x[0].sin();
            },
            |_x, _u| 1.0,
        )
    }

    #[test]
    fn interval_grid_includes_endpoints() {
        let sys = pendulum();
        let c3 = sample_controls(&sys, 3).unwrap();
        assert_eq!(c3, vec![vec![-0.2], vec![0.0], vec![0.2]]);
        let c1 = sample_controls(&sys, 1).unwrap();
        assert_eq!(c1, vec![vec![0.0]]);
        let c4 = sample_controls(&sys, 4).unwrap();
        assert_eq!(c4.len(), 4);
        assert_eq!(c4[0], vec![-0.2]);
        assert_eq!(c4[3], vec![0.2]);
        assert!(!c4.iter().any(|u| u[0] == 0.0));
    }

    #[test]
    fn circle_samples_are_uniform_angles() {
        let sys = single_integrator();
        let c = sample_controls(&sys, 4).unwrap();
        assert_eq!(c.len(), 16);
        for (k, u) in c.iter().enumerate() {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
            assert!((u[0] - angle.cos()).abs() < 1e-15);
            assert!((u[1] - angle.sin()).abs() < 1e-15);
            assert!((norm(u) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_samples_are_distinct_and_inside() {
        let sys = SystemModel::new(
            3,
            InputSet::Ball { radius: 1.0 },
            0.0,
            0.0,
            1.0,
            1.0,
            |_x, u, dx| dx.copy_from_slice(u),
            |_x, _u| 1.0,
        );
        for r in [1u32, 2, 3, 5] {
            let c = sample_controls(&sys, r).unwrap();
            assert_eq!(c.len(), (r * r * r) as usize);
            for u in &c {
                assert!(norm(u) <= 1.0 + 1e-12);
            }
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    assert!(dist(&c[i], &c[j]) > 1e-12, "duplicate ball samples at {i},{j}");
                }
            }
        }
    }

    /// Brute-force dispersion: max over a fine cover of the input set of the
    /// distance to the nearest sample. Must shrink as the resolution grows.
    fn dispersion(cover: &[Vec<f64>], samples: &[Vec<f64>]) -> f64 {
        cover
            .iter()
            .map(|p| {
                samples
                    .iter()
                    .map(|s| dist(p, s))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn dispersion_decreases_with_resolution() {
        let si = single_integrator();
        let circle_cover: Vec<Vec<f64>> = (0..10_000)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 10_000.0;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let d4 = dispersion(&circle_cover, &sample_controls(&si, 4).unwrap());
        let d8 = dispersion(&circle_cover, &sample_controls(&si, 8).unwrap());
        assert!(d8 < d4 / 2.0, "circle dispersion {d4} -> {d8}");
        // 16 samples: worst point sits half an angular gap from a sample.
        let expected = 2.0 * (std::f64::consts::PI / 32.0).sin();
        assert!((d4 - expected).abs() < 1e-3);

        let pend = pendulum();
        let line_cover: Vec<Vec<f64>> =
            (0..=1000).map(|k| vec![-0.2 + 0.4 * k as f64 / 1000.0]).collect();
        let d3 = dispersion(&line_cover, &sample_controls(&pend, 3).unwrap());
        assert!((d3 - 0.1).abs() < 1e-3);
        let d9 = dispersion(&line_cover, &sample_controls(&pend, 9).unwrap());
        assert!(d9 < d3 / 2.0);

        let ball = SystemModel::new(
            3,
            InputSet::Ball { radius: 1.0 },
            0.0,
            0.0,
            1.0,
            1.0,
            |_x, u, dx| dx.copy_from_slice(u),
            |_x, _u| 1.0,
        );
        let mut ball_cover = Vec::new();
        let g = 14;
        for i in 0..=g {
            for j in 0..=g {
                for k in 0..=g {
                    let p = vec![
                        -1.0 + 2.0 * i as f64 / g as f64,
                        -1.0 + 2.0 * j as f64 / g as f64,
                        -1.0 + 2.0 * k as f64 / g as f64,
                    ];
                    if norm(&p) <= 1.0 {
                        ball_cover.push(p);
                    }
                }
            }
        }
        let b2 = dispersion(&ball_cover, &sample_controls(&ball, 2).unwrap());
        let b6 = dispersion(&ball_cover, &sample_controls(&ball, 6).unwrap());
        assert!(b6 < b2 / 2.0, "ball dispersion {b2} -> {b6}");
    }

    #[test]
    fn euler_step_count_and_unit_cost() {
        let sys = single_integrator();
        let seg = propagate(&sys, &[0.0, 0.0], &[1.0, 0.0], 0.5, 0.005).unwrap();
        assert_eq!(seg.num_steps(), 100);
        assert!((seg.step() - 0.005).abs() < 1e-15);
        // Unit running cost integrates to the segment duration.
        assert!((seg.segment_cost - 0.5).abs() < 1e-12);
        // Straight-line motion for the single integrator.
        assert!((seg.terminal_state()[0] - 0.5).abs() < 1e-12);
        assert_eq!(seg.terminal_state()[1], 0.0);
        assert_eq!(seg.samples().count(), 101);
        // Ceiling rule: tau just over two steps still gives three.
        let seg2 = propagate(&sys, &[0.0, 0.0], &[1.0, 0.0], 0.0101, 0.005).unwrap();
        assert_eq!(seg2.num_steps(), 3);
    }

    #[test]
    fn non_finite_propagation_is_reported_with_step() {
        let blowup = SystemModel::new(
            1,
            InputSet::Interval { lower: vec![0.0], upper: vec![1.0] },
            0.0,
            0.0,
            1.0,
            1.0,
            |x, _u, dx| dx[0] = x[0] * x[0],
            |_x, _u| 1.0,
        );
        let err = propagate(&blowup, &[1e200], &[0.5], 1.0, 0.25).unwrap_err();
        match err {
            GlcError::NumericalFailure { step, .. } => assert_eq!(step, 0),
            other => panic!("expected numerical failure, got {other:?}"),
        }
    }

    #[test]
    fn euler_is_first_order_on_the_pendulum() {
        let sys = pendulum();
        let x0 = [0.3, -0.1];
        let u = [0.15];
        let tau = 1.0;
        let reference = propagate(&sys, &x0, &u, tau, 1.0 / 4096.0).unwrap();
        let err = |delta: f64| {
            let seg = propagate(&sys, &x0, &u, tau, delta).unwrap();
            dist(seg.terminal_state(), reference.terminal_state())
        };
        let e1 = err(0.1);
        let e2 = err(0.05);
        let ratio = e1 / e2;
        assert!((1.5..2.5).contains(&ratio), "first-order ratio was {ratio}");
    }

    #[test]
    fn signal_propagation_matches_manual_chaining() {
        let sys = pendulum();
        let sig = Signal {
            controls: vec![vec![0.2], vec![-0.2], vec![0.1]],
            segment_duration: 1.5,
        };
        let traj = propagate_signal(&sys, &[0.0, 0.0], &sig, 0.1).unwrap();

        let s1 = propagate(&sys, &[0.0, 0.0], &[0.2], 1.5, 0.1).unwrap();
        let s2 = propagate(&sys, s1.terminal_state(), &[-0.2], 1.5, 0.1).unwrap();
        let s3 = propagate(&sys, s2.terminal_state(), &[0.1], 1.5, 0.1).unwrap();
        assert_eq!(traj.terminal_state(), s3.terminal_state());
        assert_eq!(traj.cost, s1.segment_cost + s2.segment_cost + s3.segment_cost);
        assert_eq!(traj.len(), 3 * 15 + 1);
        assert_eq!(traj.duration(), 4.5);
        // Chain cost for unit running cost equals depth * segment duration.
        assert!((traj.cost - 4.5).abs() < 1e-12);

        let empty = propagate_signal(&sys, &[0.4, 0.2], &Signal::empty(1.5), 0.1).unwrap();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty.cost, 0.0);
        assert_eq!(empty.terminal_state(), &[0.4, 0.2]);
    }

    #[test]
    fn trajectory_timestamps_are_uniform() {
        let sys = single_integrator();
        let sig = Signal {
            controls: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            segment_duration: 0.5,
        };
        let traj = propagate_signal(&sys, &[0.0, 0.0], &sig, 0.005).unwrap();
        let times: Vec<f64> = traj.samples().map(|(t, _)| t).collect();
        for w in times.windows(2) {
            assert!((w[1] - w[0] - traj.step()).abs() < 1e-12);
        }
        assert_eq!(*times.last().unwrap(), 1.0);
    }
}
