//! Batch front end: scenario files in, plot-ready CSV/JSON out.
//!
//! Exit codes: 0 success, 2 configuration error, 3 runtime or calibration
//! failure (including reference-table cells outside tolerance).

pub mod commands;
pub mod output;
pub mod scenario;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use scenario::{Format, ScenarioFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<spectra_core::Error> for CliError {
    fn from(e: spectra_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub const DEFAULT_GOLDEN: &str = "configs/golden/golden.json";

#[derive(Debug, Parser)]
#[command(
    name = "spectra",
    version,
    about = "Downlink spectral-efficiency and RUE analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Scenario JSON (a run manifest is also accepted).
    #[arg(long)]
    pub scenario: PathBuf,
    /// Output directory, overrides `outputs.directory`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `simulation.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Table format, overrides `outputs.formats`.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte-Carlo SINR/SNR and SE distributions for each deployment.
    Simulate(RunArgs),
    /// RUE and its factor breakdown.
    Rue {
        /// Named preset (5g-baseline, dddsu-3pilot, ps-less, ps-cp-less-fd).
        #[arg(long, conflicts_with_all = ["inline", "scenario"])]
        preset: Option<String>,
        /// Inline resource configuration as JSON.
        #[arg(long, conflicts_with = "scenario")]
        inline: Option<String>,
        /// Scenario whose `pipeline.rue_preset` is reported.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Reference tables against their published values.
    Tables {
        /// Calibrated scenario.
        #[arg(long, default_value = DEFAULT_GOLDEN)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Throughput against bandwidth, and SE against peak cell throughput.
    Bandwidth(RunArgs),
    /// Solve for the transmit power that meets `power.calibrate` and write
    /// the calibrated scenario to `<out>/golden.json`.
    Calibrate(RunArgs),
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => commands::simulate::run(&args).map(|_| ()),
        Command::Rue {
            preset,
            inline,
            scenario,
            out,
            format,
        } => commands::rue::run(preset, inline, scenario, out, format),
        Command::Tables {
            scenario,
            out,
            seed,
            format,
        } => commands::tables::run(&scenario, out, seed, format).map(|_| ()),
        Command::Bandwidth(args) => commands::bandwidth::run(&args),
        Command::Calibrate(args) => commands::calibrate::run(&args).map(|_| ()),
    }
}
