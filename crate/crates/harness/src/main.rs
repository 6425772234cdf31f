use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use bergreen::{run, Experiment, ExperimentConfig, RunError};

/// Runs one verification experiment and writes `report.json` plus CSV tables.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 for an
/// invalid configuration, 3 for a numerical failure.
#[derive(Parser)]
#[command(name = "bergreen", version)]
struct Cli {
    experiment: Experiment,
    /// JSON configuration; defaults apply to every field it omits.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Seed for random point sets.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random pairs.
    #[arg(long)]
    points: Option<usize>,
    /// Replaces every tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<RunError>() {
                Some(RunError::Config(_)) => ExitCode::from(2),
                _ if e.downcast_ref::<bergreen::ConfigError>().is_some() => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.experiment = cli.experiment;
    cfg.override_with(cli.seed, cli.points, cli.tol);
    let output = run(&cfg)?;
    for c in &output.report.checks {
        println!("{c}");
    }
    for n in &output.report.notes {
        println!("note: {n}");
    }
    output
        .write_to(&cli.out)
        .with_context(|| format!("writing results to {}", cli.out.display()))?;
    println!(
        "{} {}: report written to {}",
        if output.passed() { "PASS" } else { "FAIL" },
        cfg.experiment,
        cli.out.display()
    );
    Ok(output.passed())
}
