//! One environment, two running costs. Under minimum time the pruning
//! threshold is exactly zero and a cell keeps its first-found cheapest
//! label; under the steering-effort cost 1 + 2u^2 the threshold is
//! positive, near-winners survive pruning, and labels get replaced.

use glc::{domains, glc_threshold, plan};

fn main() {
    let r = 7;
    for bench in [domains::wheeled_robot_min_time(), domains::wheeled_robot()] {
        let params = bench.params_for(r);
        let threshold = glc_threshold(&params, bench.system());
        let outcome = plan(&bench.problem, &params).expect("finite rollouts");
        println!(
            "{:<24} R={r} threshold {:>10.6} cost {:>12.9} expanded {:>6} replaced {:>4}",
            bench.name,
            threshold,
            outcome.cost,
            outcome.stats.nodes_expanded,
            outcome.stats.labels_replaced
        );
    }
}
