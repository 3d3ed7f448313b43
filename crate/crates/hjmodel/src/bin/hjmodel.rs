//! CLI entry point. Exit codes: 0 ok, 2 validation, 3 degenerate input,
//! 4 numeric failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hjmodel::cli::{run, Command, DualityCase, RunConfig};

#[derive(Parser)]
#[command(
    name = "hjmodel",
    version,
    about = "Identification of production models from output/price time series"
)]
struct Cli {
    /// Tolerance override for verification commands.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for sampled diagnostics.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here (stdout otherwise).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write an SVG diagram here (tiling and check-moment only).
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Partition the rho domain by critical values and probe solvability.
    EstimateElasticity {
        /// CSV time series with header t,y,p0,p1,p2.
        #[arg(long)]
        input: PathBuf,
    },
    /// Decide moment-problem solvability at a fixed rho.
    CheckMoment {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
    },
    /// Build the rhombic tiling at a fixed rho and test the output snake.
    Tiling {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
    },
    /// Verify the closed-form profit/production duality chains.
    DualityVerify {
        /// cd, ces or all.
        #[arg(long, default_value = "all")]
        case: String,
    },
    /// Aggregate profit of a group of industries from a JSON config.
    Aggregate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check a stable correspondence between two technology multisets.
    KStable {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        CliCommand::EstimateElasticity { input } => Command::EstimateElasticity { input },
        CliCommand::CheckMoment { input, rho } => Command::CheckMoment { input, rho },
        CliCommand::Tiling { input, rho } => Command::Tiling { input, rho },
        CliCommand::DualityVerify { case } => match case.parse::<DualityCase>() {
            Ok(case) => Command::DualityVerify { case },
            Err(e) => {
                eprintln!("hjmodel: {e}");
                return ExitCode::from(2);
            }
        },
        CliCommand::Aggregate { config } => Command::Aggregate { config },
        CliCommand::KStable { config } => Command::KStable { config },
    };
    let config = RunConfig {
        command,
        tol: cli.tol,
        seed: cli.seed,
        out: cli.out,
        svg: cli.svg,
    };
    match run(&config) {
        Ok(report) => {
            if config.out.is_none() {
                match serde_json::to_string_pretty(&report) {
                    Ok(json) => println!("{json}"),
                    Err(e) => {
                        eprintln!("hjmodel: {e}");
                        return ExitCode::from(4);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("hjmodel: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
