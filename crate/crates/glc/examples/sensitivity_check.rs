//! Empirical check of the growth bounds behind the pruning threshold:
//! propagate one signal from two nearby starts and compare the observed
//! state and cost gaps against what the declared constants promise.

use glc::analysis::{check_ic_sensitivity, perturb_within, random_signal, sample_box};
use glc::domains;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    println!(
        "{:<16} {:>12} {:>12} {:>12} {:>12}",
        "benchmark", "state gap", "state bound", "cost gap", "cost bound"
    );
    for bench in domains::all() {
        let system = bench.system().clone();
        let trial = bench.trial.clone();
        let mut worst_state = (0.0f64, 0.0f64);
        let mut worst_cost = (0.0f64, 0.0f64);
        for _ in 0..500 {
            let x0 = sample_box(&mut rng, &trial.lower, &trial.upper);
            let z0 = perturb_within(&mut rng, &x0, 1e-3);
            let signal =
                random_signal(&mut rng, &system.omega, trial.segments, trial.segment_duration);
            let check = check_ic_sensitivity(&system, &signal, &x0, &z0, bench.delta_max)
                .expect("trial boxes avoid blowup");
            if check.lhs_state > worst_state.0 {
                worst_state = (check.lhs_state, check.bound_state);
            }
            if check.lhs_cost >= worst_cost.0 {
                worst_cost = (check.lhs_cost, check.bound_cost);
            }
        }
        println!(
            "{:<16} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}",
            bench.name, worst_state.0, worst_state.1, worst_cost.0, worst_cost.1
        );
    }
}
