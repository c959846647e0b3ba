//! Best-first search over the signal tree with partition-based label pruning.
//!
//! The search pops the queued node minimizing cost plus an optional admissible
//! heuristic, returns the first popped node whose terminal state lies in the
//! goal, and expands otherwise. A candidate child is discarded when its
//! segment leaves free space, when the label of its terminal cell dominates it
//! (no later arrival time and no smaller cost by at least the pruning
//! threshold), or when it would exceed the depth horizon. Surviving children
//! are enqueued and claim their cell's label whenever they strictly improve
//! its cost.

use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::dynamics::{propagate, propagate_signal, sample_controls, SystemModel, Trajectory};
use crate::error::GlcError;
use crate::partition::{grid_key, GridKey};
use crate::region::Region;
use crate::signal_tree::{NodeId, Signal, SignalNode, SignalTree};

pub type Heuristic = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A planning problem instance. `initial_state` must lie in `free`.
#[derive(Clone)]
pub struct Problem {
    pub system: SystemModel,
    pub initial_state: Vec<f64>,
    pub free: Region,
    pub goal: Region,
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("system", &self.system)
            .field("initial_state", &self.initial_state)
            .finish_non_exhaustive()
    }
}

/// Search parameters at one resolution `R`.
///
/// The segment duration is `segment_scale / resolution`; signals may use up to
/// `horizon - 1` segments. The heuristic, when present, must never exceed the
/// true remaining cost-to-goal.
#[derive(Clone)]
pub struct PlannerParams {
    pub resolution: u32,
    /// Scale constant `c` in the segment duration `c / R`.
    pub segment_scale: f64,
    /// Partition scale: cells have side `1 / eta`.
    pub eta: f64,
    /// Depth horizon `h(R)`; children at this depth are discarded.
    pub horizon: u32,
    /// Integrator step bound; each segment uses `ceil(tau / delta_max)` steps.
    pub delta_max: f64,
    pub heuristic: Option<Heuristic>,
}

impl std::fmt::Debug for PlannerParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PlannerParams")
            .field("resolution", &self.resolution)
            .field("segment_scale", &self.segment_scale)
            .field("eta", &self.eta)
            .field("horizon", &self.horizon)
            .field("delta_max", &self.delta_max)
            .field("heuristic", &self.heuristic.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl PlannerParams {
    pub fn segment_duration(&self) -> f64 {
        self.segment_scale / self.resolution as f64
    }

    pub fn validate(&self, problem: &Problem) -> Result<(), GlcError> {
        if self.resolution == 0 {
            return Err(GlcError::InvalidParams("resolution must be at least 1".into()));
        }
        if !(self.segment_scale > 0.0) || !self.segment_scale.is_finite() {
            return Err(GlcError::InvalidParams("segment_scale must be positive".into()));
        }
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return Err(GlcError::InvalidParams("eta must be positive".into()));
        }
        if self.horizon == 0 {
            return Err(GlcError::InvalidParams("horizon must be at least 1".into()));
        }
        if !(self.delta_max > 0.0) || !self.delta_max.is_finite() {
            return Err(GlcError::InvalidParams("delta_max must be positive".into()));
        }
        if problem.initial_state.len() != problem.system.state_dim {
            return Err(GlcError::DimensionMismatch {
                expected: problem.system.state_dim,
                got: problem.initial_state.len(),
                what: "initial state",
            });
        }
        if !problem.free.contains(&problem.initial_state) {
            return Err(GlcError::InvalidParams("initial state is not in free space".into()));
        }
        Ok(())
    }
}

/// Search counters; wall time is measured, everything else is deterministic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub nodes_pruned_glc: u64,
    pub nodes_pruned_infeasible: u64,
    pub nodes_pruned_depth: u64,
    pub labels_created: u64,
    pub labels_replaced: u64,
    pub wall_time: Duration,
}

/// Result of one search. `cost` is infinite exactly when `signal` is `None`.
#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub cost: f64,
    pub signal: Option<Signal>,
    pub trajectory: Option<Trajectory>,
    pub stats: SearchStats,
}

impl PlanOutcome {
    pub fn solved(&self) -> bool {
        self.signal.is_some()
    }
}

/// Pruning threshold of the label rule.
///
/// Zero when the running cost has no state or input sensitivity (`L_g = 0`),
/// otherwise `(sqrt(n)/eta) * (L_g/L_f) * (exp(L_f h/R) - 1)`, with the
/// `L_f -> 0` limit `(sqrt(n)/eta) * L_g * h/R`.
pub fn glc_threshold(params: &PlannerParams, system: &SystemModel) -> f64 {
    let l_g = system.lipschitz_g;
    if l_g == 0.0 {
        return 0.0;
    }
    let sqrt_n = (system.state_dim as f64).sqrt();
    let l_f = system.lipschitz_f;
    let ratio = params.horizon as f64 / params.resolution as f64;
    if l_f == 0.0 {
        sqrt_n / params.eta * l_g * ratio
    } else {
        sqrt_n / params.eta * (l_g / l_f) * ((l_f * ratio).exp() - 1.0)
    }
}

/// State-space clearance scale `eps(R) = (R sqrt(n) / (L_f eta)) *
/// (exp(L_f h/R) - 1)`, with the `L_f -> 0` limit `sqrt(n) h / eta`.
///
/// The returned cost of a search is bounded by the best cost among signals
/// whose trajectories keep this clearance from the free-space boundary and
/// end this deep inside the goal.
pub fn glc_clearance(params: &PlannerParams, system: &SystemModel) -> f64 {
    let sqrt_n = (system.state_dim as f64).sqrt();
    let l_f = system.lipschitz_f;
    let h = params.horizon as f64;
    let r = params.resolution as f64;
    if l_f == 0.0 {
        sqrt_n * h / params.eta
    } else {
        r * sqrt_n / (l_f * params.eta) * ((l_f * h / r).exp() - 1.0)
    }
}

/// Label dominance on two nodes sharing a cell: the incumbent prunes the
/// candidate when it arrives no later and its cost plus the threshold does
/// not exceed the candidate's.
pub fn prunes(incumbent: &SignalNode, candidate: &SignalNode, threshold: f64) -> bool {
    incumbent.terminal_time <= candidate.terminal_time
        && incumbent.cost + threshold <= candidate.cost
}

/// Whether every sample lies in free space.
pub fn check_feasible<'a, I>(samples: I, free: &Region) -> bool
where
    I: IntoIterator<Item = (f64, &'a [f64])>,
{
    samples.into_iter().all(|(_, x)| free.contains(x))
}

/// One recorded label-pruning event, for replay in tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlcPruneRecord {
    pub label_time: f64,
    pub label_cost: f64,
    pub candidate_time: f64,
    pub candidate_cost: f64,
    pub threshold: f64,
}

/// Counters gathered by [`plan_instrumented`]; a sound run reports all
/// violation counts as zero.
#[derive(Debug, Clone, Default)]
pub struct InvariantReport {
    /// Nodes pushed onto the queue more than once.
    pub duplicate_enqueues: u64,
    /// Fresh labels written into a cell that already held one.
    pub label_occupancy_violations: u64,
    /// Label replacements that did not strictly decrease the cell cost.
    pub label_replacement_violations: u64,
    /// Pops whose cost decreased relative to the previous pop (checked only
    /// when no heuristic is installed).
    pub pop_order_violations: u64,
    /// Prunes whose recorded inequalities fail on re-evaluation.
    pub glc_prune_violations: u64,
    /// Bounded sample of pruning events, in order of occurrence.
    pub glc_prune_log: Vec<GlcPruneRecord>,
}

impl InvariantReport {
    pub fn total_violations(&self) -> u64 {
        self.duplicate_enqueues
            + self.label_occupancy_violations
            + self.label_replacement_violations
            + self.pop_order_violations
            + self.glc_prune_violations
    }
}

trait Instrument {
    fn on_pop(&mut self, cost: f64, zero_heuristic: bool);
    fn on_enqueue(&mut self, node: NodeId);
    fn on_glc_prune(&mut self, record: GlcPruneRecord);
    fn on_label_write(&mut self, key: &GridKey, previous_cost: Option<f64>, new_cost: f64);
}

struct NoInstrument;

impl Instrument for NoInstrument {
    fn on_pop(&mut self, _: f64, _: bool) {}
    fn on_enqueue(&mut self, _: NodeId) {}
    fn on_glc_prune(&mut self, _: GlcPruneRecord) {}
    fn on_label_write(&mut self, _: &GridKey, _: Option<f64>, _: f64) {}
}

const PRUNE_LOG_CAP: usize = 50_000;

struct Recording {
    report: InvariantReport,
    seen: std::collections::HashSet<NodeId>,
    occupied: std::collections::HashSet<GridKey>,
    last_popped_cost: Option<f64>,
}

impl Recording {
    fn new() -> Self {
        Recording {
            report: InvariantReport::default(),
            seen: Default::default(),
            occupied: Default::default(),
            last_popped_cost: None,
        }
    }
}

impl Instrument for Recording {
    fn on_pop(&mut self, cost: f64, zero_heuristic: bool) {
        if zero_heuristic {
            if let Some(prev) = self.last_popped_cost {
                if cost < prev {
                    self.report.pop_order_violations += 1;
                }
            }
            self.last_popped_cost = Some(cost);
        }
    }

    fn on_enqueue(&mut self, node: NodeId) {
        if !self.seen.insert(node) {
            self.report.duplicate_enqueues += 1;
        }
    }

    fn on_glc_prune(&mut self, record: GlcPruneRecord) {
        let holds = record.label_time <= record.candidate_time
            && record.label_cost + record.threshold <= record.candidate_cost;
        if !holds {
            self.report.glc_prune_violations += 1;
        }
        if self.report.glc_prune_log.len() < PRUNE_LOG_CAP {
            self.report.glc_prune_log.push(record);
        }
    }

    fn on_label_write(&mut self, key: &GridKey, previous_cost: Option<f64>, new_cost: f64) {
        match previous_cost {
            None => {
                if !self.occupied.insert(key.clone()) {
                    self.report.label_occupancy_violations += 1;
                }
            }
            Some(prev) => {
                if !self.occupied.contains(key) {
                    self.report.label_occupancy_violations += 1;
                }
                if !(new_cost < prev) {
                    self.report.label_replacement_violations += 1;
                }
            }
        }
    }
}

#[derive(Debug, PartialEq)]
struct QueueEntry {
    priority: f64,
    seq: u64,
    node: NodeId,
}

impl Eq for QueueEntry {}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueEntry {
    // Reversed so the max-heap pops the smallest priority, FIFO among ties.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .priority
            .total_cmp(&self.priority)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Runs the search and returns the first goal signal popped, or an infinite
/// cost with no signal once the queue empties.
pub fn plan(problem: &Problem, params: &PlannerParams) -> Result<PlanOutcome, GlcError> {
    plan_impl(problem, params, &mut NoInstrument)
}

/// [`plan`] plus invariant counters and a bounded pruning log.
pub fn plan_instrumented(
    problem: &Problem,
    params: &PlannerParams,
) -> Result<(PlanOutcome, InvariantReport), GlcError> {
    let mut recording = Recording::new();
    let outcome = plan_impl(problem, params, &mut recording)?;
    Ok((outcome, recording.report))
}

fn plan_impl<I: Instrument>(
    problem: &Problem,
    params: &PlannerParams,
    instrument: &mut I,
) -> Result<PlanOutcome, GlcError> {
    let start = Instant::now();
    params.validate(problem)?;
    let system = &problem.system;
    let controls = sample_controls(system, params.resolution)?;
    let tau = params.segment_duration();
    let threshold = glc_threshold(params, system);
    let zero_heuristic = params.heuristic.is_none();
    let eval_heuristic = |x: &[f64]| params.heuristic.as_ref().map_or(0.0, |h| h(x));

    let mut tree = SignalTree::new(tau);
    let mut labels: HashMap<GridKey, NodeId> = HashMap::new();
    let mut queue = BinaryHeap::new();
    let mut stats = SearchStats::default();
    let mut seq = 0u64;

    let root = tree.create_root(problem.initial_state.clone());
    queue.push(QueueEntry {
        priority: eval_heuristic(&problem.initial_state),
        seq,
        node: root,
    });
    instrument.on_enqueue(root);

    while let Some(entry) = queue.pop() {
        let popped = entry.node;
        let popped_cost = tree.node(popped).cost;
        instrument.on_pop(popped_cost, zero_heuristic);
        if problem.goal.contains(&tree.node(popped).terminal_state) {
            let signal = tree.reconstruct_signal(popped)?;
            let trajectory =
                propagate_signal(system, &problem.initial_state, &signal, params.delta_max)?;
            stats.wall_time = start.elapsed();
            return Ok(PlanOutcome {
                cost: popped_cost,
                signal: Some(signal),
                trajectory: Some(trajectory),
                stats,
            });
        }

        stats.nodes_expanded += 1;
        let child_depth = tree.node(popped).depth + 1;
        let child_time = child_depth as f64 * tau;
        for (control_index, u) in controls.iter().enumerate() {
            let parent = tree.node(popped);
            let seg = propagate(system, &parent.terminal_state, u, tau, params.delta_max)
                .map_err(|e| match e {
                    GlcError::NumericalFailure { step, .. } => GlcError::PlanAborted {
                        node: popped.index(),
                        control_index,
                        step,
                    },
                    other => other,
                })?;

            if !check_feasible(seg.samples(), &problem.free) {
                stats.nodes_pruned_infeasible += 1;
                continue;
            }
            let key = grid_key(seg.terminal_state(), params.eta)?;
            let child_cost = parent.cost + seg.segment_cost;
            let incumbent = labels.get(&key).copied();
            if let Some(z) = incumbent {
                let zn = tree.node(z);
                if zn.terminal_time <= child_time && zn.cost + threshold <= child_cost {
                    stats.nodes_pruned_glc += 1;
                    instrument.on_glc_prune(GlcPruneRecord {
                        label_time: zn.terminal_time,
                        label_cost: zn.cost,
                        candidate_time: child_time,
                        candidate_cost: child_cost,
                        threshold,
                    });
                    continue;
                }
            }
            if child_depth >= params.horizon {
                stats.nodes_pruned_depth += 1;
                continue;
            }

            let child =
                tree.add_child(popped, u.clone(), seg.terminal_state().to_vec(), seg.segment_cost)?;
            debug_assert_eq!(tree.node(child).cost.to_bits(), child_cost.to_bits());
            let incumbent_cost = incumbent.map(|z| tree.node(z).cost);
            let improves = incumbent_cost.is_none_or(|zc| child_cost < zc);
            if improves {
                instrument.on_label_write(&key, incumbent_cost, child_cost);
                match labels.entry(key) {
                    Entry::Vacant(v) => {
                        v.insert(child);
                        stats.labels_created += 1;
                    }
                    Entry::Occupied(mut o) => {
                        o.insert(child);
                        stats.labels_replaced += 1;
                    }
                }
            }
            seq += 1;
            queue.push(QueueEntry {
                priority: child_cost + eval_heuristic(tree.node(child).terminal_state.as_slice()),
                seq,
                node: child,
            });
            instrument.on_enqueue(child);
        }
    }

    stats.wall_time = start.elapsed();
    Ok(PlanOutcome { cost: f64::INFINITY, signal: None, trajectory: None, stats })
}
