//! Independent verification tooling: a brute-force enumeration oracle over
//! the sampled signal space, metrics on signals and trajectories, randomized
//! initial-condition sensitivity checks, and an empirical estimator for the
//! declared system constants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::{dist, norm, propagate, propagate_signal, sample_controls};
use crate::dynamics::{InputSet, SystemModel, Trajectory};
use crate::error::GlcError;
use crate::planner::{PlannerParams, Problem};
use crate::region::Region;
use crate::signal_tree::Signal;

/// Hard cap on `(control count)^(max segments)` for [`exhaustive_best`].
pub const ENUMERATION_LIMIT: f64 = 1e7;

/// Outcome of one oracle enumeration.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Exact minimum cost over enumerated goal-reaching signals; infinite
    /// when none qualifies.
    pub best_cost: f64,
    pub best_signal: Option<Signal>,
    /// Signals visited, counting the empty signal; extensions of a segment
    /// that already violated clearance are never visited (they inherit the
    /// violation) and are not counted.
    pub signals_enumerated: u64,
    /// The clearance margin the result was computed under.
    pub clearance: f64,
}

fn meets(region: &Region, x: &[f64], clearance: f64) -> bool {
    if clearance == 0.0 {
        region.contains(x)
    } else {
        region.clearance(x) >= clearance
    }
}

struct OracleCtx<'a> {
    problem: &'a Problem,
    controls: &'a [Vec<f64>],
    tau: f64,
    delta_max: f64,
    clearance: f64,
    max_len: usize,
}

#[derive(Debug)]
struct Branch {
    best_cost: f64,
    best: Option<Vec<usize>>,
    enumerated: u64,
}

fn dfs(
    ctx: &OracleCtx<'_>,
    state: &[f64],
    cost: f64,
    prefix: &mut Vec<usize>,
    only: Option<usize>,
    out: &mut Branch,
) -> Result<(), GlcError> {
    for (i, u) in ctx.controls.iter().enumerate() {
        if only.is_some_and(|j| j != i) {
            continue;
        }
        let seg = propagate(&ctx.problem.system, state, u, ctx.tau, ctx.delta_max)?;
        out.enumerated += 1;
        let clear = seg.samples().all(|(_, x)| meets(&ctx.problem.free, x, ctx.clearance));
        if !clear {
            continue;
        }
        let total = cost + seg.segment_cost;
        prefix.push(i);
        if total < out.best_cost && meets(&ctx.problem.goal, seg.terminal_state(), ctx.clearance) {
            out.best_cost = total;
            out.best = Some(prefix.clone());
        }
        if prefix.len() < ctx.max_len {
            dfs(ctx, seg.terminal_state(), total, prefix, None, out)?;
        }
        prefix.pop();
    }
    Ok(())
}

/// Enumerates every control sequence shorter than `params.horizon` by pure
/// depth-first search (no cost pruning) and returns the cheapest one whose
/// integration samples all keep `clearance` distance from the boundary of
/// free space and whose terminal state sits `clearance` deep inside the
/// goal. Zero clearance degenerates to plain membership.
///
/// Costs accumulate through the identical propagation calls the planner
/// makes, so agreements with [`crate::plan`] are exact, not approximate.
pub fn exhaustive_best(
    problem: &Problem,
    params: &PlannerParams,
    clearance: f64,
) -> Result<OracleResult, GlcError> {
    let controls = sample_controls(&problem.system, params.resolution)?;
    let max_len = params.horizon.saturating_sub(1) as usize;
    let requested = (controls.len() as f64).powi(max_len as i32);
    if !(requested <= ENUMERATION_LIMIT) {
        return Err(GlcError::EnumerationBudget { requested, limit: ENUMERATION_LIMIT });
    }
    let ctx = OracleCtx {
        problem,
        controls: &controls,
        tau: params.segment_duration(),
        delta_max: params.delta_max,
        clearance,
        max_len,
    };

    let mut best_cost = f64::INFINITY;
    let mut best: Option<Vec<usize>> = None;
    let mut enumerated = 1u64;
    if meets(&problem.free, &problem.initial_state, clearance)
        && meets(&problem.goal, &problem.initial_state, clearance)
    {
        best_cost = 0.0;
        best = Some(Vec::new());
    }

    if max_len > 0 {
        let branches: Vec<Result<Branch, GlcError>> = (0..controls.len())
            .into_par_iter()
            .map(|i| {
                let mut out = Branch { best_cost: f64::INFINITY, best: None, enumerated: 0 };
                let mut prefix = Vec::new();
                dfs(&ctx, &problem.initial_state, 0.0, &mut prefix, Some(i), &mut out)?;
                Ok(out)
            })
            .collect();
        // Merge in control order so ties resolve to the lexicographically
        // first sequence regardless of thread scheduling.
        for branch in branches {
            let branch = branch?;
            enumerated += branch.enumerated;
            if branch.best_cost < best_cost {
                best_cost = branch.best_cost;
                best = branch.best;
            }
        }
    }

    let best_signal = best.map(|indices| Signal {
        controls: indices.iter().map(|&i| controls[i].clone()).collect(),
        segment_duration: ctx.tau,
    });
    Ok(OracleResult { best_cost, best_signal, signals_enumerated: enumerated, clearance })
}

/// Distance between two piecewise-constant signals: the exact integral of
/// the pointwise control gap over the common domain, plus `u_max` times the
/// duration difference.
pub fn signal_distance(a: &Signal, b: &Signal, u_max: f64) -> Result<f64, GlcError> {
    if let (Some(ua), Some(ub)) = (a.controls.first(), b.controls.first()) {
        if ua.len() != ub.len() {
            return Err(GlcError::DimensionMismatch {
                expected: ua.len(),
                got: ub.len(),
                what: "control",
            });
        }
    }
    let (ta, tb) = (a.duration(), b.duration());
    let common = ta.min(tb);
    let mut integral = 0.0;
    if common > 0.0 {
        let mut cuts = vec![0.0, common];
        for s in [a, b] {
            let mut t = s.segment_duration;
            while t < common {
                cuts.push(t);
                t += s.segment_duration;
            }
        }
        cuts.sort_by(|x, y| x.total_cmp(y));
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * common);
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let va = a.value_at(mid).expect("midpoint lies inside both domains");
            let vb = b.value_at(mid).expect("midpoint lies inside both domains");
            integral += dist(va, vb) * (w[1] - w[0]);
        }
    }
    Ok(integral + u_max * (ta - tb).abs())
}

/// Distance between two trajectories sampled on the same uniform grid: the
/// largest pointwise state gap over the shorter duration plus `speed_bound`
/// times the duration difference.
pub fn trajectory_distance(
    a: &Trajectory,
    b: &Trajectory,
    speed_bound: f64,
) -> Result<f64, GlcError> {
    if a.state_at(0).len() != b.state_at(0).len() {
        return Err(GlcError::DimensionMismatch {
            expected: a.state_at(0).len(),
            got: b.state_at(0).len(),
            what: "state",
        });
    }
    if a.len() > 1 && b.len() > 1 {
        let (sa, sb) = (a.step(), b.step());
        if (sa - sb).abs() > 1e-12 * sa.max(sb) {
            return Err(GlcError::IncompatibleSampling(format!(
                "sample steps {sa} and {sb} differ"
            )));
        }
    }
    let mut gap = 0.0f64;
    for i in 0..a.len().min(b.len()) {
        gap = gap.max(dist(a.state_at(i), b.state_at(i)));
    }
    Ok(gap + speed_bound * (a.duration() - b.duration()).abs())
}

/// Both sides of the initial-condition sensitivity inequalities for one
/// signal propagated from two nearby starts.
#[derive(Debug, Clone, Copy)]
pub struct SensitivityCheck {
    /// Largest state gap over the shared sample grid.
    pub lhs_state: f64,
    /// `|x0 - z0| e^{L_f tau}`.
    pub bound_state: f64,
    /// Absolute cost difference.
    pub lhs_cost: f64,
    /// `|x0 - z0| (L_g/L_f)(e^{L_f tau} - 1)`, or `L_g tau |x0 - z0|` in the
    /// drift-free limit.
    pub bound_cost: f64,
}

impl SensitivityCheck {
    pub fn within(&self, tolerance: f64) -> bool {
        self.lhs_state <= self.bound_state + tolerance
            && self.lhs_cost <= self.bound_cost + tolerance
    }
}

/// Propagates `signal` from both starts and evaluates the sensitivity
/// inequalities against the system's declared constants.
pub fn check_ic_sensitivity(
    system: &SystemModel,
    signal: &Signal,
    x0: &[f64],
    z0: &[f64],
    delta_max: f64,
) -> Result<SensitivityCheck, GlcError> {
    let ta = propagate_signal(system, x0, signal, delta_max)?;
    let tb = propagate_signal(system, z0, signal, delta_max)?;
    let d0 = dist(x0, z0);
    let mut lhs_state = 0.0f64;
    for i in 0..ta.len() {
        lhs_state = lhs_state.max(dist(ta.state_at(i), tb.state_at(i)));
    }
    let tau = signal.duration();
    let (lf, lg) = (system.lipschitz_f, system.lipschitz_g);
    let bound_state = d0 * (lf * tau).exp();
    let bound_cost =
        if lf == 0.0 { lg * tau * d0 } else { d0 * (lg / lf) * ((lf * tau).exp() - 1.0) };
    Ok(SensitivityCheck { lhs_state, bound_state, lhs_cost: (ta.cost - tb.cost).abs(), bound_cost })
}

/// Largest finite-difference ratios seen over random sample pairs; the
/// declared system constants must dominate these.
#[derive(Debug, Clone, Copy, Default)]
pub struct LipschitzEstimate {
    pub l_f: f64,
    pub l_g: f64,
    pub m: f64,
}

pub fn estimate_lipschitz(
    system: &SystemModel,
    num_samples: u32,
    lower: &[f64],
    upper: &[f64],
    seed: u64,
) -> LipschitzEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = system.state_dim;
    let mut fx = vec![0.0; n];
    let mut fz = vec![0.0; n];
    let mut est = LipschitzEstimate::default();
    for _ in 0..num_samples {
        let x = sample_box(&mut rng, lower, upper);
        let z = sample_box(&mut rng, lower, upper);
        let u = sample_input(&mut rng, &system.omega);
        let v = sample_input(&mut rng, &system.omega);
        system.derivative(&x, &u, &mut fx);
        system.derivative(&z, &u, &mut fz);
        est.m = est.m.max(norm(&fx));
        let dxz = dist(&x, &z);
        if dxz > 1e-12 {
            est.l_f = est.l_f.max(dist(&fx, &fz) / dxz);
            est.l_g =
                est.l_g.max((system.cost_rate(&x, &u) - system.cost_rate(&z, &u)).abs() / dxz);
        }
        let duv = dist(&u, &v);
        if duv > 1e-12 {
            est.l_g =
                est.l_g.max((system.cost_rate(&x, &u) - system.cost_rate(&x, &v)).abs() / duv);
        }
    }
    est
}

/// Uniform sample from an axis-aligned box.
pub fn sample_box(rng: &mut impl Rng, lower: &[f64], upper: &[f64]) -> Vec<f64> {
    lower.iter().zip(upper).map(|(lo, hi)| rng.gen_range(*lo..=*hi)).collect()
}

/// Uniform-ish sample from an input set (rejection sampling inside balls).
pub fn sample_input(rng: &mut impl Rng, omega: &InputSet) -> Vec<f64> {
    match omega {
        InputSet::Interval { lower, upper } => sample_box(rng, lower, upper),
        InputSet::Circle { radius } => {
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            vec![radius * a.cos(), radius * a.sin()]
        }
        InputSet::Ball { radius } => loop {
            let p: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            if norm(&p) <= 1.0 {
                return p.into_iter().map(|c| c * radius).collect();
            }
        },
    }
}

/// Random piecewise-constant signal with controls drawn from `omega`.
pub fn random_signal(
    rng: &mut impl Rng,
    omega: &InputSet,
    segments: u32,
    segment_duration: f64,
) -> Signal {
    Signal {
        controls: (0..segments).map(|_| sample_input(rng, omega)).collect(),
        segment_duration,
    }
}

/// Random point within `radius` of `x` (always distinct from `x`).
pub fn perturb_within(rng: &mut impl Rng, x: &[f64], radius: f64) -> Vec<f64> {
    let dir = loop {
        let p: Vec<f64> = x.iter().map(|_| rng.gen_range(-1.0f64..=1.0)).collect();
        let len = norm(&p);
        if len > 1e-9 && len <= 1.0 {
            break p;
        }
    };
    let scale = radius * rng.gen_range(0.01f64..=1.0);
    x.iter().zip(&dir).map(|(xi, di)| xi + di * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains;
    use crate::planner::plan;
    use crate::region::inside_ball;

    fn free_space_integrator(goal_center: Vec<f64>, goal_radius: f64) -> Problem {
        Problem {
            system: domains::single_integrator_system(),
            initial_state: vec![0.0, 0.0],
            free: Region::All,
            goal: inside_ball(goal_center, goal_radius),
        }
    }

    fn params(resolution: u32, segment_scale: f64, horizon: u32) -> PlannerParams {
        PlannerParams {
            resolution,
            segment_scale,
            eta: 1.0,
            horizon,
            delta_max: 0.25,
            heuristic: None,
        }
    }

    #[test]
    fn oracle_trivial_goal_at_start() {
        let problem = free_space_integrator(vec![0.0, 0.0], 0.5);
        let r = exhaustive_best(&problem, &params(2, 2.0, 3), 0.0).unwrap();
        assert_eq!(r.best_cost, 0.0);
        assert_eq!(r.best_signal.unwrap().depth(), 0);
        assert!(r.signals_enumerated >= 1 + 4 + 16);
    }

    #[test]
    fn oracle_matches_segment_count_geometry() {
        // Unit-speed axis moves toward a ball of radius 0.3 at (2, 0): one
        // unit falls short, two land in the middle, so the best cost is the
        // two-segment duration exactly.
        let problem = free_space_integrator(vec![2.0, 0.0], 0.3);
        let r = exhaustive_best(&problem, &params(2, 2.0, 4), 0.0).unwrap();
        assert_eq!(r.best_cost, 2.0);
        let sig = r.best_signal.unwrap();
        assert_eq!(sig.depth(), 2);
        let expected_segments = ((2.0 - 0.3) / 1.0f64).ceil() as usize;
        assert_eq!(sig.depth(), expected_segments);
    }

    #[test]
    fn oracle_clearance_beyond_goal_radius_is_infeasible() {
        let problem = free_space_integrator(vec![2.0, 0.0], 0.3);
        let r = exhaustive_best(&problem, &params(2, 2.0, 4), 0.4).unwrap();
        assert!(r.best_cost.is_infinite());
        assert!(r.best_signal.is_none());
    }

    #[test]
    fn oracle_budget_guard() {
        let problem = free_space_integrator(vec![2.0, 0.0], 0.3);
        let err = exhaustive_best(&problem, &params(10, 2.0, 5), 0.0).unwrap_err();
        assert!(matches!(err, GlcError::EnumerationBudget { .. }));
    }

    #[test]
    fn oracle_and_planner_agree_on_free_space() {
        let problem = free_space_integrator(vec![2.0, 0.0], 0.3);
        let p = params(3, 2.0, 4);
        let oracle = exhaustive_best(&problem, &p, 0.0).unwrap();
        let outcome = plan(&problem, &p).unwrap();
        assert_eq!(outcome.cost, oracle.best_cost);
    }

    #[test]
    fn signal_distance_cases() {
        let a = Signal { controls: vec![vec![1.0, 0.0]], segment_duration: 1.0 };
        assert_eq!(signal_distance(&a, &a, 1.0).unwrap(), 0.0);

        let b = Signal { controls: vec![vec![1.0, 0.0]; 2], segment_duration: 1.0 };
        assert_eq!(signal_distance(&a, &b, 1.0).unwrap(), 1.0);
        assert_eq!(signal_distance(&b, &a, 1.0).unwrap(), 1.0);

        let c = Signal { controls: vec![vec![0.0, 1.0]], segment_duration: 1.0 };
        assert!((signal_distance(&a, &c, 1.0).unwrap() - 2.0f64.sqrt()).abs() < 1e-15);

        // Mismatched breakpoints: halves agree then differ by one unit.
        let d = Signal { controls: vec![vec![1.0, 0.0], vec![0.0, 0.0]], segment_duration: 0.5 };
        assert!((signal_distance(&a, &d, 1.0).unwrap() - 0.5).abs() < 1e-12);

        let empty = Signal::empty(1.0);
        assert_eq!(signal_distance(&empty, &empty, 3.0).unwrap(), 0.0);
        assert_eq!(signal_distance(&a, &empty, 2.0).unwrap(), 2.0);
    }

    #[test]
    fn trajectory_distance_cases() {
        let sys = domains::single_integrator_system();
        let sig = Signal { controls: vec![vec![1.0, 0.0]; 2], segment_duration: 0.5 };
        let t1 = propagate_signal(&sys, &[0.0, 0.0], &sig, 0.1).unwrap();
        assert_eq!(trajectory_distance(&t1, &t1, 1.0).unwrap(), 0.0);

        // Same control history from a translated start: constant offset.
        let t2 = propagate_signal(&sys, &[0.3, -0.4], &sig, 0.1).unwrap();
        assert!((trajectory_distance(&t1, &t2, 1.0).unwrap() - 0.5).abs() < 1e-15);

        // Identical paths, durations 1 and 1.5, speed bound 2: duration term.
        let pend = domains::pendulum_system();
        let s2 = Signal { controls: vec![vec![0.0]; 2], segment_duration: 0.5 };
        let s3 = Signal { controls: vec![vec![0.0]; 3], segment_duration: 0.5 };
        let p2 = propagate_signal(&pend, &[0.0, 0.0], &s2, 0.1).unwrap();
        let p3 = propagate_signal(&pend, &[0.0, 0.0], &s3, 0.1).unwrap();
        assert!((trajectory_distance(&p2, &p3, 2.0).unwrap() - 1.0).abs() < 1e-12);

        // Different sample steps are rejected.
        let fine = Signal { controls: vec![vec![0.0]; 2], segment_duration: 0.25 };
        let pf = propagate_signal(&pend, &[0.0, 0.0], &fine, 0.1).unwrap();
        assert!(matches!(
            trajectory_distance(&p2, &pf, 1.0),
            Err(GlcError::IncompatibleSampling(_))
        ));
    }

    #[test]
    fn sensitivity_translation_invariance_is_tight() {
        let sys = domains::single_integrator_system();
        let sig = Signal { controls: vec![vec![0.6, 0.8], vec![1.0, 0.0]], segment_duration: 0.5 };
        let x0 = [0.0, 0.0];
        let z0 = [3e-4, -4e-4];
        let chk = check_ic_sensitivity(&sys, &sig, &x0, &z0, 0.1).unwrap();
        // Drift-free flow carries the offset unchanged, so the inequality is
        // tight up to floating-point associativity.
        assert!((chk.lhs_state - chk.bound_state).abs() <= 1e-15);
        assert!((chk.lhs_state - 5e-4).abs() < 1e-12);
        assert_eq!(chk.lhs_cost, 0.0);
        assert_eq!(chk.bound_cost, 0.0);
        assert!(chk.within(1e-15));
    }

    #[test]
    fn sensitivity_identical_starts_are_zero() {
        let sys = domains::pendulum_system();
        let sig = Signal { controls: vec![vec![0.1]; 3], segment_duration: 1.0 };
        let chk = check_ic_sensitivity(&sys, &sig, &[0.4, 0.0], &[0.4, 0.0], 0.1).unwrap();
        assert_eq!(chk.lhs_state, 0.0);
        assert_eq!(chk.lhs_cost, 0.0);
        assert!(chk.within(0.0));
    }

    #[test]
    fn estimator_recovers_known_constants() {
        let si = domains::single_integrator_system();
        let est = estimate_lipschitz(&si, 2000, &[0.0, 0.0], &[10.0, 10.0], 7);
        assert_eq!(est.l_f, 0.0);
        assert_eq!(est.l_g, 0.0);
        assert!((est.m - 1.0).abs() < 1e-12);

        let pend = domains::pendulum_system();
        let est = estimate_lipschitz(&pend, 20000, &[-30.0, -4.2], &[30.0, 4.2], 7);
        assert!(est.l_f <= 1.0 + 1e-9, "pendulum slope estimate {}", est.l_f);
        assert!(est.l_f > 0.9);
        assert_eq!(est.l_g, 0.0);
        assert!(est.m <= pend.speed_bound);

        let uni = domains::unicycle_system(true);
        let est = estimate_lipschitz(&uni, 20000, &[0.0, 0.0, -7.0], &[10.0, 10.0, 7.0], 7);
        assert!(est.l_g <= 4.0 && est.l_g > 3.0, "comfort rate slope {}", est.l_g);
        assert!(est.l_f <= 1.0 + 1e-9);
        assert!(est.m <= uni.speed_bound);
    }

    #[test]
    fn perturbation_stays_within_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = [1.0, -2.0, 0.5];
        for _ in 0..200 {
            let z = perturb_within(&mut rng, &x, 1e-3);
            let d = dist(&x, &z);
            assert!(d > 0.0 && d <= 1e-3);
        }
    }

    #[test]
    fn random_signals_stay_in_the_input_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for omega in [
            InputSet::Interval { lower: vec![-0.2], upper: vec![0.2] },
            InputSet::Circle { radius: 1.0 },
            InputSet::Ball { radius: 1.0 },
        ] {
            let sig = random_signal(&mut rng, &omega, 20, 0.5);
            assert_eq!(sig.depth(), 20);
            for u in &sig.controls {
                assert!(omega.contains(u));
            }
        }
    }
}
