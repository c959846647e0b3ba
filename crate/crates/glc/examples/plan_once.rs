//! Smallest possible use of the planner: pick a stock benchmark, plan at
//! one resolution, and walk the returned signal and trajectory.

use glc::{domains, plan};

fn main() {
    let bench = domains::pendulum();
    let params = bench.params_for(6);
    println!(
        "planning {} at R=6: {} control samples, segments of {:.3}s, depth limit {}",
        bench.name,
        params.resolution,
        params.segment_duration(),
        params.horizon
    );

    let outcome = plan(&bench.problem, &params).expect("propagation stays finite");
    println!(
        "cost {:.9}, {} nodes expanded, {} labels",
        outcome.cost, outcome.stats.nodes_expanded, outcome.stats.labels_created
    );

    let signal = outcome.signal.expect("pendulum solves at R=6");
    let trajectory = outcome.trajectory.expect("solved outcomes carry a trajectory");
    println!("signal: {} segments of {:.3}s", signal.depth(), signal.segment_duration);
    let torques: Vec<f64> = signal.controls.iter().map(|u| u[0]).collect();
    println!("torques: {torques:.2?}");

    let terminal = trajectory.state_at(trajectory.len() - 1);
    println!(
        "terminal state: angle {:.4} rad, rate {:.4} rad/s after {:.2}s",
        terminal[0],
        terminal[1],
        trajectory.duration()
    );
}
