//! The full harness path on an inline problem: load a config file that
//! defines its own environment on a stock dynamics family, sweep it, and
//! write results.csv. The default config is the obstacle-free line whose
//! true minimum time is 2.9.

use std::path::{Path, PathBuf};

use glc::harness::{execute, render_report, CliOptions};

fn main() {
    let config = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/analytic_line.toml")
    });
    println!("config: {}", config.display());

    let report = match execute(&config, &CliOptions::default()) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(glc::harness::exit_code(&err));
        }
    };
    print!("{}", render_report(&report));

    let best = report.rows.iter().map(|row| row.cost).fold(f64::INFINITY, f64::min);
    println!("best cost {best:.9}");
}
