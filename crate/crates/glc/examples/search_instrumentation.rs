//! Instrumented planning: the same search with online verification of the
//! queue and label discipline, plus a peek at the first few prune events.

use glc::{domains, plan_instrumented};

fn main() {
    let bench = domains::point_robot_3d();
    let params = bench.params_for(8);
    let (outcome, report) = plan_instrumented(&bench.problem, &params).expect("finite rollouts");

    println!("benchmark: {} at R=8", bench.name);
    println!(
        "cost {:.9}, expanded {}, labels {} ({} replaced)",
        outcome.cost,
        outcome.stats.nodes_expanded,
        outcome.stats.labels_created,
        outcome.stats.labels_replaced
    );
    println!(
        "violations: {} (duplicate enqueues {}, occupancy {}, replacement {}, pop order {}, prune rule {})",
        report.total_violations(),
        report.duplicate_enqueues,
        report.label_occupancy_violations,
        report.label_replacement_violations,
        report.pop_order_violations,
        report.glc_prune_violations
    );

    println!("first prune events (candidate cost vs incumbent cost):");
    for event in report.glc_prune_log.iter().take(5) {
        println!("  {event:?}");
    }
}
