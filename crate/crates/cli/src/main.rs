//! `wavestring`: batch analysis and simulation of platoons from JSON scenario
//! files.
//!
//! Exit codes: 0 success, 1 invalid configuration or usage, 2 violated model
//! assumption, 3 numerical failure.

mod commands;
mod config;
mod error;
mod output;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::config::{Overrides, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::output::OutDir;
use crate::sweep::{parse_range, SweepParam};

#[derive(Parser)]
#[command(name = "wavestring", version, about = "Wave transfer function analysis of platoons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Directory that receives the output files.
    #[arg(long)]
    out: PathBuf,
    /// Number of frequency grid points, overriding the scenario.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Integration step in seconds, overriding the scenario.
    #[arg(long)]
    dt: Option<f64>,
    /// Accepted for interface compatibility; every command is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Structural checks, wave transfer function norms and the string stability verdict.
    Analyze(Common),
    /// Time-domain simulation: trajectory.csv and metrics.json.
    Simulate(Common),
    /// Forward/backward wave decomposition of one agent's step response.
    Waves(Common),
    /// One verdict row per value of h, mu or N.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        param: SweepParam,
        /// Evenly spaced values `a:b:n`.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "values", conflicts_with = "values")]
        range: Option<String>,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Option<Vec<f64>>,
    },
}

impl Common {
    fn load(&self) -> CliResult<(config::Scenario, OutDir)> {
        let overrides = Overrides {
            grid_points: self.grid_points,
            dt: self.dt,
        };
        let scenario = ScenarioConfig::load(&self.config)?.resolve(overrides)?;
        let out = OutDir::create(&self.out)?;
        Ok((scenario, out))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze(c) => {
            let (sc, out) = c.load()?;
            commands::analyze(&sc, &out)
        }
        Command::Simulate(c) => {
            let (sc, out) = c.load()?;
            commands::simulate_cmd(&sc, &out)
        }
        Command::Waves(c) => {
            let (sc, out) = c.load()?;
            commands::waves(&sc, &out)
        }
        Command::Sweep {
            common,
            param,
            range,
            values,
        } => {
            let values = match (range, values) {
                (Some(r), None) => parse_range(&r)?,
                (None, Some(v)) => v,
                _ => return Err(CliError::Config("give exactly one of --range or --values".into())),
            };
            let (sc, out) = common.load()?;
            sweep::sweep(&sc, param, &values, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wavestring: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
