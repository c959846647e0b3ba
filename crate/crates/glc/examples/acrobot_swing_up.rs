//! Acrobot swing-up with torque at the elbow only. The free space bounds
//! the angular rates at 12 rad/s; resolutions below 9 exhaust because
//! their long control segments cannot keep the rates inside that bound,
//! while 9 and 10 thread it and reach the inverted balance.

use std::time::Instant;

use glc::{domains, plan};

fn main() {
    let bench = domains::acrobot();
    println!("benchmark: {}", bench.name);
    println!("{:>4} {:>13} {:>9} {:>9} {:>6}", "R", "cost", "expanded", "labels", "secs");

    for r in [8u32, 9, 10] {
        let t0 = Instant::now();
        let outcome = plan(&bench.problem, &bench.params_for(r)).expect("rates stay bounded");
        println!(
            "{r:>4} {:>13.9} {:>9} {:>9} {:>6.2}",
            outcome.cost,
            outcome.stats.nodes_expanded,
            outcome.stats.labels_created,
            t0.elapsed().as_secs_f64()
        );
    }

    let solved = plan(&bench.problem, &bench.params_for(9)).expect("rates stay bounded");
    if let Some(trajectory) = &solved.trajectory {
        let terminal = trajectory.state_at(trajectory.len() - 1);
        println!(
            "R=9 terminal: theta1 {:.3}, theta2 {:.3}, rates ({:.3}, {:.3})",
            terminal[0], terminal[1], terminal[2], terminal[3]
        );
    }
}
