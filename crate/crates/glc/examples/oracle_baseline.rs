//! The planner against brute force. On an instance small enough to
//! enumerate every control sequence, the planner's cost always lands
//! between the exact enumerated optimum and the optimum restricted to
//! signals that keep a clearance margin; the margin is the price of
//! pruning whole cells on one representative.

use glc::analysis::exhaustive_best;
use glc::domains::single_integrator_system;
use glc::{glc_clearance, inside_ball, inside_box, plan, PlannerParams, Problem, Region};

fn main() {
    let problem = Problem {
        system: single_integrator_system(),
        initial_state: vec![0.0, 0.0],
        free: Region::intersection(vec![
            inside_box(vec![-5.0, -5.0], vec![5.0, 5.0]),
            inside_box(vec![0.9, -0.5], vec![1.3, 0.5]).complement(),
        ]),
        goal: inside_ball(vec![2.2, 0.0], 0.9),
    };

    println!(
        "{:>2} {:>2} {:>10} {:>10} {:>10} {:>10} {:>7}",
        "R", "h", "exact", "planner", "interior", "clearance", "signals"
    );
    for resolution in [2u32, 3] {
        for horizon in [3u32, 4] {
            let params = PlannerParams {
                resolution,
                segment_scale: 3.0,
                eta: 40.0,
                horizon,
                delta_max: 0.25,
                heuristic: None,
            };
            let eps = glc_clearance(&params, &problem.system);
            let outcome = plan(&problem, &params).expect("finite rollouts");
            let exact = exhaustive_best(&problem, &params, 0.0).expect("within budget");
            let interior = exhaustive_best(&problem, &params, eps).expect("within budget");
            assert!(exact.best_cost <= outcome.cost && outcome.cost <= interior.best_cost);
            println!(
                "{resolution:>2} {horizon:>2} {:>10.4} {:>10.4} {:>10.4} {eps:>10.4} {:>7}",
                exact.best_cost, outcome.cost, interior.best_cost, exact.signals_enumerated
            );
        }
    }
}
