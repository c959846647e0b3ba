//! Thin CLI over the benchmark harness. All behavior lives in the library;
//! this wrapper only parses flags, sizes the thread pool, and maps errors to
//! process exit codes.

use std::path::PathBuf;

use clap::Parser;
use glc::harness::{self, CliOptions};

#[derive(Parser)]
#[command(name = "glc-bench", about = "Run planner benchmark sweeps and emit CSV results")]
struct Args {
    /// Run config file (structured text).
    #[arg(long)]
    config: PathBuf,
    /// Named benchmark, overriding the config.
    #[arg(long)]
    benchmark: Option<String>,
    /// Comma-separated resolution list, overriding the config.
    #[arg(long, value_delimiter = ',')]
    resolutions: Option<Vec<u32>>,
    /// Disable the admissible heuristic even if the benchmark defines one.
    #[arg(long)]
    no_heuristic: bool,
    /// Fixed depth horizon, replacing the horizon formula.
    #[arg(long)]
    h_override: Option<u32>,
    /// Output directory for results.csv and trajectory files.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write trajectory_R.csv for every solved resolution.
    #[arg(long)]
    emit_trajectory: bool,
    /// Concurrent sweep entries (default: one per core).
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() {
    let args = Args::parse();
    if let Some(jobs) = args.jobs {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("failed to size thread pool: {err}");
            std::process::exit(2);
        }
    }
    let cli = CliOptions {
        benchmark: args.benchmark,
        resolutions: args.resolutions,
        no_heuristic: args.no_heuristic,
        h_override: args.h_override,
        output: args.output,
        emit_trajectory: args.emit_trajectory,
    };
    match harness::execute(&args.config, &cli) {
        Ok(report) => print!("{}", harness::render_report(&report)),
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(harness::exit_code(&err));
        }
    }
}
