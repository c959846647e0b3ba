//! Benchmark harness: declarative run configs, resolution sweeps, CSV
//! emission, and the exit-code contract consumed by the thin CLI wrapper.
//!
//! Persisted results files never carry timing columns, so rerunning the same
//! config reproduces them byte for byte; wall-clock numbers travel only in
//! the in-memory report and the rendered summary.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use crate::domains::{self, goal_distance_heuristic, ScaleFormula, POINT_ROBOT_MAX_SPEED_SQ};
use crate::dynamics::Trajectory;
use crate::error::GlcError;
use crate::planner::{plan, Heuristic, PlannerParams, Problem};
use crate::region::{inside_ball, inside_box, Region};
use crate::signal_tree::Signal;

#[derive(Debug)]
pub enum HarnessError {
    Config(String),
    Io(PathBuf, std::io::Error),
    Plan(GlcError),
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Config(msg) => write!(f, "config error: {msg}"),
            HarnessError::Io(path, err) => write!(f, "io error at {}: {err}", path.display()),
            HarnessError::Plan(err) => write!(f, "planner error: {err}"),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<GlcError> for HarnessError {
    fn from(err: GlcError) -> Self {
        HarnessError::Plan(err)
    }
}

/// Process exit code for an error: 3 for numerical failures inside a run,
/// 2 for everything else (bad config, unknown benchmark, unwritable output).
pub fn exit_code(err: &HarnessError) -> i32 {
    match err {
        HarnessError::Plan(
            GlcError::NumericalFailure { .. }
            | GlcError::PlanAborted { .. }
            | GlcError::NonFiniteState,
        ) => 3,
        _ => 2,
    }
}

/// `coefficient * R^exponent`, optionally times `ln R`, as it appears in
/// config files.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormulaSpec {
    pub coefficient: f64,
    #[serde(default)]
    pub exponent: f64,
    #[serde(default)]
    pub log_factor: bool,
}

impl FormulaSpec {
    pub fn to_formula(self) -> ScaleFormula {
        ScaleFormula {
            coefficient: self.coefficient,
            exponent: self.exponent,
            log_factor: self.log_factor,
        }
    }
}

/// Optional parameter overrides applied on top of a named benchmark.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideSpec {
    /// Segment duration scale, as in `c / R`.
    pub c: Option<f64>,
    pub delta_max: Option<f64>,
    pub eta: Option<FormulaSpec>,
    pub horizon: Option<FormulaSpec>,
    pub heuristic: Option<bool>,
    /// Fixed depth horizon, replacing the horizon formula at every R.
    pub h_override: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Goal as a union of balls with a shared radius over leading state
/// coordinates.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalSpec {
    pub centers: Vec<Vec<f64>>,
    pub radius: f64,
}

/// Inline problem definition built on one of the stock dynamics families.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomSpec {
    pub family: String,
    pub c: f64,
    pub delta_max: f64,
    pub initial_state: Vec<f64>,
    pub eta: FormulaSpec,
    pub horizon: FormulaSpec,
    pub goal: GoalSpec,
    #[serde(default)]
    pub obstacles: Vec<BoxSpec>,
    pub workspace: Option<BoxSpec>,
    #[serde(default)]
    pub heuristic: bool,
}

/// One parsed run config: either a named benchmark (plus overrides) or a
/// fully inline `[custom]` problem, never both.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub benchmark: Option<String>,
    pub resolutions: Option<Vec<u32>>,
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub emit_trajectory: bool,
    pub overrides: Option<OverrideSpec>,
    pub custom: Option<CustomSpec>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::Io(path.to_owned(), e))?;
        Self::from_toml_str(&text)
    }
}

/// Command-line switches layered over the config file.
#[derive(Debug, Clone, Default)]
pub struct CliOptions {
    pub benchmark: Option<String>,
    pub resolutions: Option<Vec<u32>>,
    pub no_heuristic: bool,
    pub h_override: Option<u32>,
    pub output: Option<PathBuf>,
    pub emit_trajectory: bool,
}

/// Fully resolved run: problem, parameter formulas, sweep, and output plan.
pub struct ResolvedRun {
    pub name: String,
    pub problem: Problem,
    pub segment_scale: f64,
    pub delta_max: f64,
    pub eta: ScaleFormula,
    pub horizon: ScaleFormula,
    pub h_override: Option<u32>,
    pub heuristic: Option<Heuristic>,
    pub resolutions: Vec<u32>,
    pub output_dir: PathBuf,
    pub emit_trajectory: bool,
}

impl fmt::Debug for ResolvedRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResolvedRun")
            .field("name", &self.name)
            .field("segment_scale", &self.segment_scale)
            .field("delta_max", &self.delta_max)
            .field("eta", &self.eta)
            .field("horizon", &self.horizon)
            .field("h_override", &self.h_override)
            .field("heuristic", &self.heuristic.is_some())
            .field("resolutions", &self.resolutions)
            .field("output_dir", &self.output_dir)
            .field("emit_trajectory", &self.emit_trajectory)
            .finish_non_exhaustive()
    }
}

impl ResolvedRun {
    pub fn resolve(config: RunConfig, cli: &CliOptions) -> Result<ResolvedRun, HarnessError> {
        if config.benchmark.is_some() && config.custom.is_some() {
            return Err(HarnessError::Config(
                "config sets both `benchmark` and `[custom]`; pick one".into(),
            ));
        }
        let named = cli.benchmark.clone().or_else(|| config.benchmark.clone());
        let mut run = match (named, config.custom) {
            (Some(name), _) => {
                let bench = domains::by_name(&name)
                    .ok_or_else(|| HarnessError::Config(format!("unknown benchmark '{name}'")))?;
                ResolvedRun {
                    name: bench.name.to_string(),
                    problem: bench.problem,
                    segment_scale: bench.segment_scale,
                    delta_max: bench.delta_max,
                    eta: bench.eta,
                    horizon: bench.horizon,
                    h_override: None,
                    heuristic: bench.heuristic,
                    resolutions: bench.resolution_sweep,
                    output_dir: PathBuf::new(),
                    emit_trajectory: false,
                }
            }
            (None, Some(custom)) => build_custom(custom)?,
            (None, None) => {
                return Err(HarnessError::Config(
                    "config names no benchmark and has no [custom] section".into(),
                ))
            }
        };

        if let Some(ov) = &config.overrides {
            if let Some(c) = ov.c {
                run.segment_scale = c;
            }
            if let Some(d) = ov.delta_max {
                run.delta_max = d;
            }
            if let Some(eta) = ov.eta {
                run.eta = eta.to_formula();
            }
            if let Some(h) = ov.horizon {
                run.horizon = h.to_formula();
            }
            if ov.heuristic == Some(false) {
                run.heuristic = None;
            }
            run.h_override = ov.h_override;
        }

        if let Some(rs) = cli.resolutions.clone().or(config.resolutions) {
            run.resolutions = rs;
        }
        if run.resolutions.is_empty() {
            return Err(HarnessError::Config("resolutions must be non-empty".into()));
        }
        if run.resolutions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HarnessError::Config(format!(
                "resolutions must be strictly increasing, got {:?}",
                run.resolutions
            )));
        }
        if cli.no_heuristic {
            run.heuristic = None;
        }
        if cli.h_override.is_some() {
            run.h_override = cli.h_override;
        }
        run.output_dir =
            cli.output.clone().or(config.output_dir).unwrap_or_else(|| PathBuf::from("."));
        run.emit_trajectory = cli.emit_trajectory || config.emit_trajectory;
        Ok(run)
    }

    pub fn params_for(&self, r: u32) -> PlannerParams {
        PlannerParams {
            resolution: r,
            segment_scale: self.segment_scale,
            eta: self.eta.eval(r),
            horizon: self.h_override.unwrap_or_else(|| self.horizon.eval_ceil(r)),
            delta_max: self.delta_max,
            heuristic: self.heuristic.clone(),
        }
    }
}

fn family_system(name: &str) -> Option<(crate::dynamics::SystemModel, Option<f64>)> {
    match name {
        "single_integrator_2d" => Some((domains::single_integrator_system(), Some(1.0))),
        "pendulum" => Some((domains::pendulum_system(), None)),
        "acrobot" => Some((domains::acrobot_system(), None)),
        "double_integrator_3d" => {
            Some((domains::double_integrator_system(), Some(POINT_ROBOT_MAX_SPEED_SQ.sqrt())))
        }
        "unicycle_min_time" => Some((domains::unicycle_system(false), None)),
        "unicycle_comfort" => Some((domains::unicycle_system(true), None)),
        _ => None,
    }
}

fn check_box(spec: &BoxSpec, state_dim: usize, what: &str) -> Result<(), HarnessError> {
    if spec.lower.len() != spec.upper.len() || spec.lower.is_empty() {
        return Err(HarnessError::Config(format!("{what}: lower/upper lengths disagree")));
    }
    if spec.lower.len() > state_dim {
        return Err(HarnessError::Config(format!(
            "{what}: {} coordinates exceed state dimension {state_dim}",
            spec.lower.len()
        )));
    }
    if spec.lower.iter().zip(&spec.upper).any(|(lo, hi)| !(lo < hi)) {
        return Err(HarnessError::Config(format!("{what}: lower must be strictly below upper")));
    }
    Ok(())
}

fn build_custom(spec: CustomSpec) -> Result<ResolvedRun, HarnessError> {
    let (system, heuristic_speed) = family_system(&spec.family)
        .ok_or_else(|| HarnessError::Config(format!("unknown family '{}'", spec.family)))?;
    if spec.initial_state.len() != system.state_dim {
        return Err(HarnessError::Config(format!(
            "initial_state has {} coordinates; family '{}' expects {}",
            spec.initial_state.len(),
            spec.family,
            system.state_dim
        )));
    }
    if spec.goal.centers.is_empty() {
        return Err(HarnessError::Config("goal needs at least one center".into()));
    }
    let k = spec.goal.centers[0].len();
    if k == 0 || k > system.state_dim || spec.goal.centers.iter().any(|c| c.len() != k) {
        return Err(HarnessError::Config(format!(
            "goal centers must share a length in 1..={}",
            system.state_dim
        )));
    }
    if !(spec.goal.radius > 0.0) {
        return Err(HarnessError::Config("goal radius must be positive".into()));
    }

    let mut parts: Vec<Region> = Vec::new();
    if let Some(ws) = &spec.workspace {
        check_box(ws, system.state_dim, "workspace")?;
        parts.push(inside_box(ws.lower.clone(), ws.upper.clone()));
    }
    for (i, ob) in spec.obstacles.iter().enumerate() {
        check_box(ob, system.state_dim, &format!("obstacles[{i}]"))?;
        parts.push(inside_box(ob.lower.clone(), ob.upper.clone()).complement());
    }
    let free = match parts.len() {
        0 => Region::All,
        1 => parts.pop().expect("one part"),
        _ => Region::intersection(parts),
    };

    let balls: Vec<Region> = spec
        .goal
        .centers
        .iter()
        .map(|c| inside_ball(c.clone(), spec.goal.radius))
        .collect();
    let goal = if balls.len() == 1 {
        balls.into_iter().next().expect("one ball")
    } else {
        Region::union(balls)
    };

    let heuristic: Option<Heuristic> = match (spec.heuristic, heuristic_speed) {
        (true, Some(speed)) => {
            let parts: Vec<Heuristic> = spec
                .goal
                .centers
                .iter()
                .map(|c| goal_distance_heuristic(c.clone(), spec.goal.radius, speed))
                .collect();
            Some(Arc::new(move |x: &[f64]| {
                parts.iter().map(|h| h(x)).fold(f64::INFINITY, f64::min)
            }))
        }
        (true, None) => {
            return Err(HarnessError::Config(format!(
                "family '{}' has no admissible heuristic",
                spec.family
            )))
        }
        (false, _) => None,
    };

    Ok(ResolvedRun {
        name: spec.family.clone(),
        problem: Problem { system, initial_state: spec.initial_state, free, goal },
        segment_scale: spec.c,
        delta_max: spec.delta_max,
        eta: spec.eta.to_formula(),
        horizon: spec.horizon.to_formula(),
        h_override: None,
        heuristic,
        resolutions: Vec::new(),
        output_dir: PathBuf::new(),
        emit_trajectory: false,
    })
}

/// One results-table row; exactly the columns persisted to `results.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub resolution: u32,
    pub cost: f64,
    pub solved: bool,
    pub nodes_expanded: u64,
    pub nodes_pruned_glc: u64,
    pub labels: u64,
}

/// Outcome of a sweep: rows in resolution order plus per-row wall times.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub name: String,
    pub rows: Vec<SweepRow>,
    pub wall_ms: Vec<f64>,
    pub results_path: PathBuf,
}

/// Formats with 9 significant digits; infinities as `inf`. Values already
/// produced by this formatter survive a parse/format round trip unchanged.
pub fn fmt_sig(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn parse_sig(text: &str) -> Result<f64, HarnessError> {
    match text {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => text
            .parse::<f64>()
            .map_err(|e| HarnessError::Config(format!("bad numeric field '{text}': {e}"))),
    }
}

/// Snaps a cost to the value its serialized form parses back to, so emitted
/// tables reproduce the in-memory table exactly.
pub fn normalize_cost(cost: f64) -> f64 {
    parse_sig(&fmt_sig(cost)).expect("formatter output always parses")
}

pub const RESULTS_HEADER: &str = "R,cost,solved,nodes_expanded,nodes_pruned_glc,labels";

pub fn emit_results(rows: &[SweepRow]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.resolution,
            fmt_sig(row.cost),
            row.solved,
            row.nodes_expanded,
            row.nodes_pruned_glc,
            row.labels
        ));
    }
    out
}

pub fn parse_results(text: &str) -> Result<Vec<SweepRow>, HarnessError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == RESULTS_HEADER => {}
        other => {
            return Err(HarnessError::Config(format!("unexpected results header {other:?}")))
        }
    }
    let field_err = |row: usize, what: &str| {
        HarnessError::Config(format!("results row {row}: bad {what} field"))
    };
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(HarnessError::Config(format!(
                "results row {i}: expected 6 fields, got {}",
                fields.len()
            )));
        }
        rows.push(SweepRow {
            resolution: fields[0].parse().map_err(|_| field_err(i, "R"))?,
            cost: parse_sig(fields[1])?,
            solved: fields[2].parse().map_err(|_| field_err(i, "solved"))?,
            nodes_expanded: fields[3].parse().map_err(|_| field_err(i, "nodes_expanded"))?,
            nodes_pruned_glc: fields[4].parse().map_err(|_| field_err(i, "nodes_pruned_glc"))?,
            labels: fields[5].parse().map_err(|_| field_err(i, "labels"))?,
        });
    }
    Ok(rows)
}

/// Prefix minima of the row costs; infinities propagate until a finite cost
/// appears.
pub fn best_so_far(rows: &[SweepRow]) -> Vec<f64> {
    let mut best = f64::INFINITY;
    rows.iter()
        .map(|row| {
            best = best.min(row.cost);
            best
        })
        .collect()
}

/// Serializes a solved trajectory with its control signal. Columns are the
/// sample time, the state coordinates, then the control active at that time
/// (the final sample repeats the last control).
pub fn trajectory_csv(trajectory: &Trajectory, signal: &Signal, input_dim: usize) -> String {
    let n = trajectory.state_at(0).len();
    let mut out = String::from("t");
    for i in 1..=n {
        out.push_str(&format!(",x{i}"));
    }
    for i in 1..=input_dim {
        out.push_str(&format!(",u{i}"));
    }
    out.push('\n');
    for k in 0..trajectory.len() {
        let t = trajectory.time_at(k);
        out.push_str(&fmt_sig(t));
        for v in trajectory.state_at(k) {
            out.push(',');
            out.push_str(&fmt_sig(*v));
        }
        match signal.value_at(t) {
            Some(u) => {
                for v in u {
                    out.push(',');
                    out.push_str(&fmt_sig(*v));
                }
            }
            None => {
                for _ in 0..input_dim {
                    out.push_str(",0.00000000");
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Plans every resolution in the sweep (concurrently; rows stay in sweep
/// order), writes `results.csv` and any per-resolution trajectory files
/// under the output directory, and returns the table.
pub fn run_sweep(run: &ResolvedRun) -> Result<RunReport, HarnessError> {
    fs::create_dir_all(&run.output_dir)
        .map_err(|e| HarnessError::Io(run.output_dir.clone(), e))?;
    let outcomes: Vec<Result<_, GlcError>> = run
        .resolutions
        .par_iter()
        .map(|&r| {
            let params = run.params_for(r);
            let start = Instant::now();
            let outcome = plan(&run.problem, &params)?;
            Ok((outcome, start.elapsed().as_secs_f64() * 1e3))
        })
        .collect();

    let mut rows = Vec::with_capacity(run.resolutions.len());
    let mut wall_ms = Vec::with_capacity(run.resolutions.len());
    for (&r, result) in run.resolutions.iter().zip(outcomes) {
        let (outcome, ms) = result?;
        rows.push(SweepRow {
            resolution: r,
            cost: normalize_cost(outcome.cost),
            solved: outcome.solved(),
            nodes_expanded: outcome.stats.nodes_expanded,
            nodes_pruned_glc: outcome.stats.nodes_pruned_glc,
            labels: outcome.stats.labels_created,
        });
        wall_ms.push(ms);
        if run.emit_trajectory && outcome.solved() {
            let signal = outcome.signal.as_ref().expect("solved outcome has a signal");
            let trajectory =
                outcome.trajectory.as_ref().expect("solved outcome has a trajectory");
            let csv = trajectory_csv(trajectory, signal, run.problem.system.input_dim);
            let path = run.output_dir.join(format!("trajectory_{r}.csv"));
            fs::write(&path, csv).map_err(|e| HarnessError::Io(path.clone(), e))?;
        }
    }

    let results_path = run.output_dir.join("results.csv");
    fs::write(&results_path, emit_results(&rows))
        .map_err(|e| HarnessError::Io(results_path.clone(), e))?;
    Ok(RunReport { name: run.name.clone(), rows, wall_ms, results_path })
}

/// Loads a config, applies CLI switches, and runs the sweep.
pub fn execute(config_path: &Path, cli: &CliOptions) -> Result<RunReport, HarnessError> {
    let config = RunConfig::load(config_path)?;
    let run = ResolvedRun::resolve(config, cli)?;
    run_sweep(&run)
}

/// Human-readable summary for stdout; includes wall times, unlike the CSV.
pub fn render_report(report: &RunReport) -> String {
    let mut out = format!("benchmark: {}\n", report.name);
    out.push_str("R,cost,solved,nodes_expanded,nodes_pruned_glc,labels,wall_ms\n");
    for (row, ms) in report.rows.iter().zip(&report.wall_ms) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{ms:.1}\n",
            row.resolution,
            fmt_sig(row.cost),
            row.solved,
            row.nodes_expanded,
            row.nodes_pruned_glc,
            row.labels
        ));
    }
    out.push_str(&format!("results: {}\n", report.results_path.display()));
    out
}
