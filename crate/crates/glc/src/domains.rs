//! Stock benchmark problems: a shortest-path bug trap, pendulum and acrobot
//! swing-up, a drag-limited 3D point robot, and a turn-rate-limited wheeled
//! robot, each with its published scaling formulas and a replacement obstacle
//! layout with exact coordinates.

use std::sync::Arc;

use crate::dynamics::{InputSet, SystemModel};
use crate::planner::{Heuristic, PlannerParams, Problem};
pub use crate::region::{halfspace, inside_ball, inside_box, Region};

/// Closed-form scale `coefficient * R^exponent * (ln R if log_factor)`.
///
/// Covers every per-domain formula for the partition scale and the depth
/// horizon without an expression language.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFormula {
    pub coefficient: f64,
    pub exponent: f64,
    pub log_factor: bool,
}

impl ScaleFormula {
    pub fn constant(value: f64) -> Self {
        ScaleFormula { coefficient: value, exponent: 0.0, log_factor: false }
    }

    pub fn eval(&self, r: u32) -> f64 {
        let rf = r as f64;
        let log = if self.log_factor { rf.ln() } else { 1.0 };
        self.coefficient * rf.powf(self.exponent) * log
    }

    /// Ceiled integer evaluation for depth horizons, at least 1.
    pub fn eval_ceil(&self, r: u32) -> u32 {
        self.eval(r).ceil().max(1.0) as u32
    }
}

/// Sampling box and signal shape for the randomized perturbation trials.
///
/// The box and durations are sized so trajectories stay inside the region
/// where the system's declared constants dominate.
#[derive(Debug, Clone)]
pub struct SensitivityTrial {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub segments: u32,
    pub segment_duration: f64,
}

/// One benchmark: a problem instance plus the resolution-indexed parameter
/// factory and the operating region its constants were estimated over.
#[derive(Clone)]
pub struct BenchmarkConfig {
    pub name: &'static str,
    pub problem: Problem,
    pub segment_scale: f64,
    pub eta: ScaleFormula,
    pub horizon: ScaleFormula,
    pub delta_max: f64,
    pub resolution_sweep: Vec<u32>,
    pub heuristic: Option<Heuristic>,
    /// Box over which `lipschitz_f`, `lipschitz_g`, and `speed_bound` hold.
    pub lipschitz_region: (Vec<f64>, Vec<f64>),
    pub trial: SensitivityTrial,
}

impl BenchmarkConfig {
    pub fn system(&self) -> &SystemModel {
        &self.problem.system
    }

    /// Planner parameters at resolution `r` per this benchmark's formulas.
    pub fn params_for(&self, r: u32) -> PlannerParams {
        PlannerParams {
            resolution: r,
            segment_scale: self.segment_scale,
            eta: self.eta.eval(r),
            horizon: self.horizon.eval_ceil(r),
            delta_max: self.delta_max,
            heuristic: self.heuristic.clone(),
        }
    }
}

pub fn single_integrator_system() -> SystemModel {
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

/// Holonomic unit-speed robot in a 10 by 10 workspace with a three-wall trap
/// around the start; the goal sits behind the trap so the optimum threads the
/// mouth and doubles back.
pub fn shortest_path() -> BenchmarkConfig {
    let walls = Region::union(vec![
        inside_box(vec![4.0, 3.0], vec![7.0, 3.5]),
        inside_box(vec![4.0, 6.5], vec![7.0, 7.0]),
        inside_box(vec![6.5, 3.0], vec![7.0, 7.0]),
    ]);
    let free = Region::intersection(vec![
        inside_box(vec![0.0, 0.0], vec![10.0, 10.0]),
        walls.complement(),
    ]);
    BenchmarkConfig {
        name: "shortest_path",
        problem: Problem {
            system: single_integrator_system(),
            initial_state: vec![5.5, 5.0],
            free,
            goal: inside_ball(vec![8.5, 5.0], 0.5),
        },
        segment_scale: 10.0,
        eta: ScaleFormula { coefficient: 1.0 / 300.0, exponent: 2.0, log_factor: false },
        horizon: ScaleFormula { coefficient: 100.0, exponent: 1.0, log_factor: true },
        delta_max: 0.005,
        resolution_sweep: (20..=200).step_by(5).collect(),
        heuristic: None,
        lipschitz_region: (vec![0.0, 0.0], vec![10.0, 10.0]),
        trial: SensitivityTrial {
            lower: vec![1.0, 1.0],
            upper: vec![9.0, 9.0],
            segments: 3,
            segment_duration: 0.5,
        },
    }
}

pub fn pendulum_system() -> SystemModel {
    SystemModel::new(
        2,
        InputSet::Interval { lower: vec![-0.2], upper: vec![0.2] },
        1.0,
        0.0,
        4.5,
        0.2,
        |x, u, dx| {
            dx[0] = x[1];
            dx[1] = u[0] - x[0].sin();
        },
        |_x, _u| 1.0,
    )
}

/// Torque-limited pendulum swing-up from rest to either upright state.
pub fn pendulum() -> BenchmarkConfig {
    BenchmarkConfig {
        name: "pendulum",
        problem: Problem {
            system: pendulum_system(),
            initial_state: vec![0.0, 0.0],
            free: Region::All,
            goal: Region::union(vec![
                inside_ball(vec![std::f64::consts::PI, 0.0], 0.1),
                inside_ball(vec![-std::f64::consts::PI, 0.0], 0.1),
            ]),
        },
        segment_scale: 6.0,
        eta: ScaleFormula { coefficient: 1.0 / 16.0, exponent: 2.5, log_factor: false },
        horizon: ScaleFormula { coefficient: 100.0, exponent: 1.0, log_factor: true },
        delta_max: 0.1,
        resolution_sweep: (4..=8).collect(),
        heuristic: None,
        lipschitz_region: (vec![-30.0, -4.2], vec![30.0, 4.2]),
        trial: SensitivityTrial {
            lower: vec![-3.0, -2.0],
            upper: vec![3.0, 2.0],
            segments: 4,
            segment_duration: 1.5,
        },
    }
}

// Two-link arm, both links mass 1 and length 1 with mid-link centers of mass,
// link inertia 1/12, gravity 9.8, torque at the elbow only. Angles measured
// from the hanging configuration; theta2 is relative to link one.
const ACROBOT_LIPSCHITZ_F: f64 = 900.0;
const ACROBOT_SPEED_BOUND: f64 = 600.0;

fn acrobot_mass_matrix(cos_t2: f64) -> (f64, f64, f64) {
    let m11 = 5.0 / 3.0 + cos_t2;
    let m12 = 1.0 / 3.0 + 0.5 * cos_t2;
    let m22 = 1.0 / 3.0;
    (m11, m12, m22)
}

pub fn acrobot_system() -> SystemModel {
    SystemModel::new(
        4,
        InputSet::Interval { lower: vec![-4.0], upper: vec![4.0] },
        ACROBOT_LIPSCHITZ_F,
        0.0,
        ACROBOT_SPEED_BOUND,
        4.0,
        |x, u, dx| {
            let (t1, t2, w1, w2) = (x[0], x[1], x[2], x[3]);
            let (s1, s2, c2) = (t1.sin(), t2.sin(), t2.cos());
            let s12 = (t1 + t2).sin();
            let (m11, m12, m22) = acrobot_mass_matrix(c2);
            let det = m11 * m22 - m12 * m12;
            let cor1 = -0.5 * s2 * (2.0 * w1 * w2 + w2 * w2);
            let cor2 = 0.5 * s2 * w1 * w1;
            let grav1 = 14.7 * s1 + 4.9 * s12;
            let grav2 = 4.9 * s12;
            let r1 = -cor1 - grav1;
            let r2 = u[0] - cor2 - grav2;
            dx[0] = w1;
            dx[1] = w2;
            dx[2] = (m22 * r1 - m12 * r2) / det;
            dx[3] = (m11 * r2 - m12 * r1) / det;
        },
        |_x, _u| 1.0,
    )
}

/// Total mechanical energy of the acrobot; conserved along unactuated flow.
pub fn acrobot_energy(x: &[f64]) -> f64 {
    let (t1, t2, w1, w2) = (x[0], x[1], x[2], x[3]);
    let (m11, m12, m22) = acrobot_mass_matrix(t2.cos());
    let kinetic = 0.5 * (m11 * w1 * w1 + 2.0 * m12 * w1 * w2 + m22 * w2 * w2);
    let potential = -14.7 * t1.cos() - 4.9 * (t1 + t2).cos();
    kinetic + potential
}

/// Acrobot swing-up from hanging rest to either full-state inverted ball.
///
/// Free space bounds the angular rates at 12 rad/s, in the spirit of the
/// simulator limits common for this model. The bound also keeps Euler
/// rollouts representable: on an unbounded state space, torque-saturated
/// branches grow the rates super-exponentially and overflow within a few
/// segments, aborting the run. With the bound, such branches leave free
/// space while still finite and are discarded as infeasible. Coarse
/// resolutions still exhaust without reaching the goal because their long
/// segments cannot keep the rates inside the bound; the sweep starts
/// solving at R = 9.
pub fn acrobot() -> BenchmarkConfig {
    let pi = std::f64::consts::PI;
    let rate_bounds = inside_box(
        vec![f64::NEG_INFINITY, f64::NEG_INFINITY, -12.0, -12.0],
        vec![f64::INFINITY, f64::INFINITY, 12.0, 12.0],
    );
    BenchmarkConfig {
        name: "acrobot",
        problem: Problem {
            system: acrobot_system(),
            initial_state: vec![0.0; 4],
            free: rate_bounds,
            goal: Region::union(vec![
                inside_ball(vec![pi, 0.0, 0.0, 0.0], 0.5),
                inside_ball(vec![-pi, 0.0, 0.0, 0.0], 0.5),
            ]),
        },
        segment_scale: 6.0,
        eta: ScaleFormula { coefficient: 1.0 / 16.0, exponent: 2.0, log_factor: false },
        horizon: ScaleFormula { coefficient: 100.0, exponent: 1.0, log_factor: true },
        delta_max: 0.1,
        resolution_sweep: (5..=10).collect(),
        heuristic: None,
        lipschitz_region: (vec![-1.5, -3.0, -5.0, -9.0], vec![1.5, 3.0, 5.0, 9.0]),
        trial: SensitivityTrial {
            lower: vec![-0.5, -0.5, -1.0, -1.0],
            upper: vec![0.5, 0.5, 1.0, 1.0],
            segments: 1,
            segment_duration: 0.3,
        },
    }
}

pub const POINT_ROBOT_MAX_SPEED_SQ: f64 = 50.0;

pub fn double_integrator_system() -> SystemModel {
    SystemModel::new(
        6,
        InputSet::Ball { radius: 1.0 },
        1.75,
        0.0,
        12.3,
        1.0,
        |x, u, dx| {
            let v = &x[3..6];
            let speed = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            dx[0] = v[0];
            dx[1] = v[1];
            dx[2] = v[2];
            dx[3] = 5.0 * u[0] - 0.1 * v[0] * speed;
            dx[4] = 5.0 * u[1] - 0.1 * v[1] * speed;
            dx[5] = 5.0 * u[2] - 0.1 * v[2] * speed;
        },
        |_x, _u| 1.0,
    )
}

/// Admissible cost-to-go: Euclidean distance to the goal ball over the top
/// speed the drag term permits.
pub fn goal_distance_heuristic(center: Vec<f64>, radius: f64, max_speed: f64) -> Heuristic {
    Arc::new(move |x: &[f64]| {
        let d: f64 = center
            .iter()
            .zip(x)
            .map(|(c, xi)| (xi - c) * (xi - c))
            .sum::<f64>()
            .sqrt();
        (d - radius).max(0.0) / max_speed
    })
}

/// Drag-limited double integrator crossing a walled doorway between two
/// rooms of a 10 by 10 by 10 workspace, guided by the speed-bound heuristic.
pub fn point_robot_3d() -> BenchmarkConfig {
    let goal_center = vec![8.0, 5.0, 5.0];
    let goal_radius = 1.0;
    let wall = inside_box(vec![4.8, 0.0, 0.0], vec![5.2, 10.0, 10.0]);
    let doorway = inside_box(vec![4.7, 4.0, 4.0], vec![5.3, 6.0, 6.0]);
    let obstacle = Region::intersection(vec![wall, doorway.complement()]);
    let free = Region::intersection(vec![
        inside_box(vec![0.0, 0.0, 0.0], vec![10.0, 10.0, 10.0]),
        obstacle.complement(),
    ]);
    let heuristic =
        goal_distance_heuristic(goal_center.clone(), goal_radius, POINT_ROBOT_MAX_SPEED_SQ.sqrt());
    BenchmarkConfig {
        name: "point_robot_3d",
        problem: Problem {
            system: double_integrator_system(),
            initial_state: vec![2.0, 5.0, 5.0, 0.0, 0.0, 0.0],
            free,
            goal: inside_ball(goal_center, goal_radius),
        },
        segment_scale: 10.0,
        eta: ScaleFormula { coefficient: 1.0 / 64.0, exponent: 1.5, log_factor: false },
        horizon: ScaleFormula { coefficient: 100.0, exponent: 1.0, log_factor: true },
        delta_max: 0.1,
        resolution_sweep: (8..=14).collect(),
        heuristic: Some(heuristic),
        lipschitz_region: (
            vec![0.0, 0.0, 0.0, -4.1, -4.1, -4.1],
            vec![10.0, 10.0, 10.0, 4.1, 4.1, 4.1],
        ),
        trial: SensitivityTrial {
            lower: vec![2.0, 2.0, 2.0, -2.0, -2.0, -2.0],
            upper: vec![8.0, 8.0, 8.0, 2.0, 2.0, 2.0],
            segments: 2,
            segment_duration: 0.3,
        },
    }
}

pub fn unicycle_system(comfort: bool) -> SystemModel {
    let cost_rate =
        move |_x: &[f64], u: &[f64]| if comfort { 1.0 + 2.0 * u[0] * u[0] } else { 1.0 };
    // The comfort rate is state-independent but input-sensitive; its declared
    // constant is the gradient bound 4|u| <= 4 over the input set.
    let lipschitz_g = if comfort { 4.0 } else { 0.0 };
    SystemModel::new(
        3,
        InputSet::Interval { lower: vec![-1.0], upper: vec![1.0] },
        1.0,
        lipschitz_g,
        1.42,
        1.0,
        |x, u, dx| {
            dx[0] = x[2].cos();
            dx[1] = x[2].sin();
            dx[2] = u[0];
        },
        cost_rate,
    )
}

fn wheeled_robot_config(name: &'static str, comfort: bool) -> BenchmarkConfig {
    let free = Region::intersection(vec![
        inside_box(vec![0.0, 0.0], vec![10.0, 10.0]),
        inside_box(vec![3.5, 0.0], vec![4.5, 6.0]).complement(),
    ]);
    BenchmarkConfig {
        name,
        problem: Problem {
            system: unicycle_system(comfort),
            initial_state: vec![1.0, 5.0, 0.0],
            free,
            goal: inside_ball(vec![8.0, 6.0], 1.0),
        },
        segment_scale: 10.0,
        eta: ScaleFormula {
            coefficient: 15.0,
            exponent: 5.0 / std::f64::consts::PI,
            log_factor: false,
        },
        horizon: ScaleFormula { coefficient: 5.0, exponent: 1.0, log_factor: true },
        delta_max: 0.02,
        resolution_sweep: (4..=9).collect(),
        heuristic: None,
        lipschitz_region: (vec![0.0, 0.0, -7.0], vec![10.0, 10.0, 7.0]),
        trial: SensitivityTrial {
            lower: vec![1.0, 1.0, -3.0],
            upper: vec![9.0, 9.0, 3.0],
            segments: 3,
            segment_duration: 0.8,
        },
    }
}

/// Unit-speed turn-rate-limited robot rounding a wall, paying `1 + 2u^2` per
/// unit time for steering effort.
pub fn wheeled_robot() -> BenchmarkConfig {
    wheeled_robot_config("wheeled_robot", true)
}

/// The same environment under pure minimum time.
pub fn wheeled_robot_min_time() -> BenchmarkConfig {
    wheeled_robot_config("wheeled_robot_min_time", false)
}

/// The five canonical benchmarks, in presentation order.
pub fn all() -> Vec<BenchmarkConfig> {
    vec![shortest_path(), pendulum(), acrobot(), point_robot_3d(), wheeled_robot()]
}

pub fn by_name(name: &str) -> Option<BenchmarkConfig> {
    match name {
        "shortest_path" => Some(shortest_path()),
        "pendulum" => Some(pendulum()),
        "acrobot" => Some(acrobot()),
        "point_robot_3d" => Some(point_robot_3d()),
        "wheeled_robot" => Some(wheeled_robot()),
        "wheeled_robot_min_time" => Some(wheeled_robot_min_time()),
        _ => None,
    }
}
