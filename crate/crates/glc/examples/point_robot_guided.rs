//! Effect of the admissible distance heuristic on the 3D point robot: the
//! returned cost is identical with and without it, the work is not.

use glc::{domains, plan};

fn main() {
    let bench = domains::point_robot_3d();
    println!("benchmark: {} (heuristic: distance to goal over top speed)", bench.name);
    println!(
        "{:>4} {:>13} {:>13} {:>10} {:>10}",
        "R", "guided cost", "blind cost", "guided exp", "blind exp"
    );

    for r in [8u32, 9, 10] {
        let guided = plan(&bench.problem, &bench.params_for(r)).expect("finite rollouts");
        let mut blind_params = bench.params_for(r);
        blind_params.heuristic = None;
        let blind = plan(&bench.problem, &blind_params).expect("finite rollouts");
        println!(
            "{r:>4} {:>13.9} {:>13.9} {:>10} {:>10}",
            guided.cost, blind.cost, guided.stats.nodes_expanded, blind.stats.nodes_expanded
        );
        assert!((guided.cost - blind.cost).abs() <= 1e-9, "guidance changed the answer");
    }
}
