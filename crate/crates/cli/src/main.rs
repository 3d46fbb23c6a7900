//! `gaugedist`: distance fields measured by a polytope gauge.
//!
//! Exit status: 0 on success, 1 when a verification check fails, 2 for
//! configuration, input or file-system errors.

mod commands;
mod config;
mod export;
mod grid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Failure, Job, Overrides};

#[derive(Parser)]
#[command(name = "gaugedist", version, about = "Anisotropic distance fields measured by a polytope gauge")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the distance on a lattice and write field.csv, field.pgm and regions.svg.
    Distfield(JobArgs),
    /// Run the property suites and write a JSON report.
    Verify(JobArgs),
    /// Tabulate formula and finite-difference derivatives at the configured points.
    Derivatives(JobArgs),
    /// Print the support function at each point, or the polar vertices.
    Polar(QueryArgs),
    /// Print the gauge at each point.
    Gauge(QueryArgs),
}

#[derive(Args)]
struct JobArgs {
    /// TOML job file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing [default: the config's `out`, else .]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the random samples of the property suites.
    #[arg(long)]
    seed: Option<u64>,
    /// Boundary samples per piece for the brute-force oracle.
    #[arg(long)]
    budget: Option<usize>,
    /// Lattice nodes per axis.
    #[arg(long)]
    resolution: Option<usize>,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    job: JobArgs,
    /// Comma-separated coordinates; may be repeated.
    #[arg(long = "point", allow_hyphen_values = true)]
    points: Vec<String>,
}

fn job(args: &JobArgs) -> Result<Job, Failure> {
    let cfg = config::load(&args.config)?;
    Job::new(
        cfg,
        Overrides {
            out: args.out.clone(),
            seed: args.seed,
            budget: args.budget,
            resolution: args.resolution,
        },
    )
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Distfield(a) => {
            let grid = commands::distfield(&job(&a)?)?;
            println!("{} cells, {} region labels", grid.cells.len(), grid.labels().len());
            Ok(())
        }
        Command::Verify(a) => commands::verify(&job(&a)?),
        Command::Derivatives(a) => commands::derivatives(&job(&a)?),
        Command::Polar(q) => {
            let j = job(&q.job)?;
            let points = commands::parse_points(&q.points, j.polytope.dim())?;
            commands::polar(&j, &points, &mut std::io::stdout().lock())
        }
        Command::Gauge(q) => {
            let j = job(&q.job)?;
            let points = commands::parse_points(&q.points, j.polytope.dim())?;
            commands::gauge(&j, &points, &mut std::io::stdout().lock())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
