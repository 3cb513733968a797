//! `hubflow`: validate, solve and report hub scheduling scenarios.
//!
//! Exit codes: 0 success, 1 fatal scenario diagnostics, 2 unreadable input
//! or corrupt output bundle, 3 infeasible, 4 unbounded, 5 iteration limit,
//! 6 numerical breakdown.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hubflow_core::builder::LossOrientation;

#[derive(Parser)]
#[command(name = "hubflow", version, about = "Optimal scheduling of networked multi-carrier hubs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario and print its diagnostics.
    Validate { scenario: PathBuf },
    /// Build and solve a scenario, writing schedules, totals and a manifest.
    Solve(SolveArgs),
    /// Re-render totals and audit findings from a solve directory.
    Report { dir: PathBuf },
    /// Write the bundled three-hub case study (document plus series files).
    CaseStudy {
        dir: PathBuf,
        #[arg(long, default_value_t = 168)]
        steps: usize,
    },
}

#[derive(clap::Args)]
pub struct SolveArgs {
    pub scenario: PathBuf,
    /// Output directory for the CSV bundle and manifest.
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long)]
    pub export_mps: Option<PathBuf>,
    #[arg(long)]
    pub export_lp: Option<PathBuf>,
    #[arg(long, default_value = "physical", value_parser = parse_orientation)]
    pub loss_orientation: LossOrientation,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Row residual tolerance, scaled by 1 + the largest right-hand side.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    /// Recorded in the manifest; has no numerical effect.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn parse_orientation(s: &str) -> Result<LossOrientation, String> {
    s.parse()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HUBFLOW_LOG", "error")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Validate { scenario } => commands::validate(&scenario),
        Command::Solve(args) => commands::solve(&args),
        Command::Report { dir } => commands::report(&dir),
        Command::CaseStudy { dir, steps } => commands::case_study(&dir, steps),
    };
    ExitCode::from(code as u8)
}
