//! Resolution completeness on the 2D wall trap: coarse resolutions exhaust
//! without an answer, finer ones solve with nonincreasing best cost. The
//! partition cells shrink like 1/R^2 while segments shrink like 1/R, so the
//! search only escapes the trap once cells resolve the doorway-free detour.

use std::time::Instant;

use glc::{domains, plan};

fn main() {
    let bench = domains::shortest_path();
    println!("benchmark: {}", bench.name);
    println!("{:>4} {:>13} {:>9} {:>8} {:>8}", "R", "cost", "expanded", "labels", "secs");

    let mut best = f64::INFINITY;
    for r in [20u32, 30, 40] {
        let t0 = Instant::now();
        let outcome = plan(&bench.problem, &bench.params_for(r)).expect("finite rollouts");
        best = best.min(outcome.cost);
        println!(
            "{r:>4} {:>13.9} {:>9} {:>8} {:>8.2}",
            outcome.cost,
            outcome.stats.nodes_expanded,
            outcome.stats.labels_created,
            t0.elapsed().as_secs_f64()
        );
    }
    println!("best so far: {best:.9}");
}
