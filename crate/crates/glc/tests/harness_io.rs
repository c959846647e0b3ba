//! Config parsing, CSV schemas, trajectory invariants, and process exit
//! codes, exercised end to end through the harness and the glc-bench
//! binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use glc::domains;
use glc::harness::{
    parse_results, run_sweep, CliOptions, ResolvedRun, RunConfig, RESULTS_HEADER,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn repo_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn resolve_str(text: &str, cli: &CliOptions) -> ResolvedRun {
    ResolvedRun::resolve(RunConfig::from_toml_str(text).unwrap(), cli).unwrap()
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glc-bench"))
        .args(args)
        .output()
        .expect("glc-bench runs")
}

#[test]
fn results_csv_round_trips_through_the_parser() {
    let dir = tempfile::tempdir().unwrap();
    let cli = CliOptions { output: Some(dir.path().into()), ..CliOptions::default() };
    // R = 20 exhausts on this benchmark and R = 30 solves, so the table
    // carries one inf row and one finite row through the round trip.
    let run = resolve_str("benchmark = \"shortest_path\"\nresolutions = [20, 30]\n", &cli);
    let report = run_sweep(&run).unwrap();

    let text = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert!(text.starts_with(RESULTS_HEADER));
    assert_eq!(parse_results(&text).unwrap(), report.rows);
    assert_eq!(report.rows.len(), 2);
    assert!(!report.rows[0].solved && report.rows[0].cost.is_infinite());
    assert!(report.rows[1].solved && report.rows[1].cost.is_finite());
}

#[test]
fn trajectory_files_satisfy_the_sampling_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let cli = CliOptions {
        output: Some(dir.path().into()),
        emit_trajectory: true,
        ..CliOptions::default()
    };
    let run = resolve_str("benchmark = \"wheeled_robot\"\nresolutions = [4]\n", &cli);
    run_sweep(&run).unwrap();

    let text = std::fs::read_to_string(dir.path().join("trajectory_4.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,x3,u1"));
    let rows: Vec<Vec<f64>> = lines
        .map(|line| line.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() > 2);
    assert!(rows.iter().all(|row| row.len() == 5));

    // tau = 10/4, delta_max = 0.02: 125 steps of exactly 0.02s per segment.
    let step = 0.02;
    assert_eq!(rows[0][0], 0.0);
    for pair in rows.windows(2) {
        assert!(((pair[1][0] - pair[0][0]) - step).abs() <= 1e-9, "uneven timestamps");
    }
    assert_eq!((rows.len() - 1) % 125, 0, "rows must cover whole segments");

    let bench = domains::wheeled_robot();
    assert_eq!(&rows[0][1..4], bench.problem.initial_state.as_slice());
    let last = rows.last().unwrap();
    assert!(bench.problem.goal.contains(&last[1..4]));
    // Interval inputs: every turn-rate sample stays in [-1, 1].
    for row in &rows {
        assert!(row[4].abs() <= 1.0 + 1e-12);
    }
}

#[test]
fn cli_flags_override_the_config() {
    let text = "benchmark = \"pendulum\"\n";
    let cli = CliOptions {
        benchmark: Some("shortest_path".into()),
        resolutions: Some(vec![20, 30]),
        no_heuristic: false,
        h_override: Some(7),
        output: Some("unused".into()),
        emit_trajectory: false,
    };
    let run = resolve_str(text, &cli);
    assert_eq!(run.name, "shortest_path");
    assert_eq!(run.resolutions, vec![20, 30]);
    assert_eq!(run.params_for(20).horizon, 7);

    let guided = resolve_str("benchmark = \"point_robot_3d\"\n", &CliOptions::default());
    assert!(guided.heuristic.is_some());
    let blind = resolve_str(
        "benchmark = \"point_robot_3d\"\n",
        &CliOptions { no_heuristic: true, ..CliOptions::default() },
    );
    assert!(blind.heuristic.is_none());
}

#[test]
fn malformed_configs_are_rejected() {
    for (text, needle) in [
        ("benchmark = \"no_such_benchmark\"\n", "unknown benchmark"),
        ("resolutions = [20]\n", "no benchmark"),
        ("benchmark = \"pendulum\"\nbenchmarks = 3\n", "unknown field"),
        ("benchmark = \"pendulum\"\nresolutions = [30, 20]\n", "strictly increasing"),
        ("benchmark = \"pendulum\"\nresolutions = []\n", "non-empty"),
    ] {
        let config = RunConfig::from_toml_str(text)
            .and_then(|c| ResolvedRun::resolve(c, &CliOptions::default()).map(|_| ()));
        let err = config.expect_err(text).to_string();
        assert!(err.contains(needle), "error for {text:?} was {err:?}");
    }

    let both = "benchmark = \"pendulum\"\n\n[custom]\nfamily = \"pendulum\"\nc = 6.0\n\
                delta_max = 0.1\ninitial_state = [0.0, 0.0]\n\
                eta = { coefficient = 1.0 }\nhorizon = { coefficient = 4.0 }\n\n\
                [custom.goal]\ncenters = [[3.14, 0.0]]\nradius = 0.1\n";
    let err = RunConfig::from_toml_str(both)
        .and_then(|c| ResolvedRun::resolve(c, &CliOptions::default()).map(|_| ()))
        .expect_err("benchmark and custom together")
        .to_string();
    assert!(err.contains("pick one"), "got {err:?}");
}

fn membership_agrees(
    a: &glc::Region,
    b: &glc::Region,
    samples: u32,
    dim: usize,
    lo: f64,
    hi: f64,
    seed: u64,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inside = 0u32;
    for _ in 0..samples {
        let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(lo..=hi)).collect();
        assert_eq!(a.contains(&x), b.contains(&x), "membership split at {x:?}");
        inside += a.contains(&x) as u32;
    }
    // A degenerate always-false or always-true comparison proves nothing.
    assert!(inside > 0 && inside < samples);
}

#[test]
fn shipped_custom_configs_reproduce_the_stock_geometry() {
    let bugtrap = RunConfig::load(&repo_config("bugtrap_2d.toml")).unwrap();
    let bugtrap = ResolvedRun::resolve(bugtrap, &CliOptions::default()).unwrap();
    let stock = domains::shortest_path();
    assert_eq!(bugtrap.problem.initial_state, stock.problem.initial_state);
    membership_agrees(&bugtrap.problem.free, &stock.problem.free, 4000, 2, -1.0, 11.0, 17);
    membership_agrees(&bugtrap.problem.goal, &stock.problem.goal, 4000, 2, 4.0, 10.0, 18);

    let rooms = RunConfig::load(&repo_config("point_robot_rooms.toml")).unwrap();
    let rooms = ResolvedRun::resolve(rooms, &CliOptions::default()).unwrap();
    let stock = domains::point_robot_3d();
    assert_eq!(rooms.problem.initial_state, stock.problem.initial_state);
    assert!(rooms.heuristic.is_some());
    membership_agrees(&rooms.problem.free, &stock.problem.free, 6000, 6, -0.5, 10.5, 19);
    // Position samples near the wall stress the doorway decomposition.
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..4000 {
        let x = vec![
            rng.gen_range(4.5..=5.5),
            rng.gen_range(3.0..=7.0),
            rng.gen_range(3.0..=7.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        ];
        assert_eq!(
            rooms.problem.free.contains(&x),
            stock.problem.free.contains(&x),
            "doorway membership split at {x:?}"
        );
    }
}

#[test]
fn bin_runs_a_sweep_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(&config, "benchmark = \"shortest_path\"\nresolutions = [20]\n").unwrap();
    let out_dir = dir.path().join("out");

    let out = bin(&[
        "--config",
        config.to_str().unwrap(),
        "--output",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("benchmark: shortest_path"), "stdout: {stdout}");
    assert!(stdout.contains("wall_ms"), "stdout: {stdout}");
    let results = std::fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert!(results.contains("20,"));
}

#[test]
fn bin_reports_unsolved_rows_as_inf_not_as_errors() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(&config, "benchmark = \"shortest_path\"\nresolutions = [20]\n").unwrap();
    let out_dir = dir.path().join("out");

    // Depth 2 cannot bridge the 3-unit gap at tau = 0.5; the run still
    // completes and records the exhaustion.
    let out = bin(&[
        "--config",
        config.to_str().unwrap(),
        "--output",
        out_dir.to_str().unwrap(),
        "--h-override",
        "2",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let results = std::fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert!(results.contains("20,inf,false,"), "results: {results}");
}

#[test]
fn bin_maps_config_errors_to_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_name = dir.path().join("bad_name.toml");
    std::fs::write(&bad_name, "benchmark = \"warp_drive\"\n").unwrap();
    let bad_syntax = dir.path().join("bad_syntax.toml");
    std::fs::write(&bad_syntax, "benchmark = [unterminated\n").unwrap();

    for (path, needle) in [
        (bad_name, "unknown benchmark"),
        (bad_syntax, "config error"),
        (dir.path().join("missing.toml"), "io error"),
    ] {
        let out = bin(&["--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "config {path:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(needle), "stderr for {path:?}: {stderr}");
    }
}

#[test]
fn bin_maps_numerical_aborts_to_exit_three() {
    // The acrobot family without a workspace: torque-saturated branches
    // grow their rates without bound and overflow inside a segment.
    let config_text = "resolutions = [5]\n\n[custom]\nfamily = \"acrobot\"\nc = 6.0\n\
                       delta_max = 0.1\ninitial_state = [0.0, 0.0, 0.0, 0.0]\n\
                       eta = { coefficient = 0.0625, exponent = 2.0 }\n\
                       horizon = { coefficient = 100.0, exponent = 1.0, log_factor = true }\n\n\
                       [custom.goal]\n\
                       centers = [[3.141592653589793, 0.0, 0.0, 0.0]]\nradius = 0.5\n";
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("free_acrobot.toml");
    std::fs::write(&config, config_text).unwrap();

    let out = bin(&[
        "--config",
        config.to_str().unwrap(),
        "--output",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("search aborted"), "stderr: {stderr}");
}
