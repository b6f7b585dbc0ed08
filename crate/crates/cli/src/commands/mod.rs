pub mod bandwidth;
pub mod calibrate;
pub mod rue;
pub mod simulate;
pub mod tables;

use std::path::PathBuf;

use spectra_core::montecarlo::{calibrate_tx_power, CalibrationOptions, CalibrationResult};

use crate::scenario::{Format, ScenarioFile};
use crate::{CliError, RunArgs};

/// Scenario with command-line overrides applied.
pub struct Prepared {
    pub scenario: ScenarioFile,
    pub out: PathBuf,
    pub formats: Vec<Format>,
}

pub fn prepare(
    scenario: ScenarioFile,
    out: Option<PathBuf>,
    seed: Option<u64>,
    format: Option<Format>,
) -> Prepared {
    let mut scenario = scenario;
    if let Some(seed) = seed {
        scenario.simulation.seed = seed;
    }
    let out = out.unwrap_or_else(|| PathBuf::from(&scenario.outputs.directory));
    let formats = match format {
        Some(f) => vec![f],
        None => scenario.outputs.formats.clone(),
    };
    Prepared {
        scenario,
        out,
        formats,
    }
}

pub fn prepare_args(args: &RunArgs) -> Result<Prepared, CliError> {
    let scenario = ScenarioFile::load(&args.scenario)?;
    Ok(prepare(scenario, args.out.clone(), args.seed, args.format))
}

pub fn calibrate(scenario: &ScenarioFile) -> Result<CalibrationResult, CliError> {
    let spec = scenario.power.calibrate.clone().unwrap_or_default();
    let template = scenario.simulation_config(spec.deployment, 0.0)?;
    calibrate_tx_power(
        &template,
        spec.percentile,
        spec.target_db,
        CalibrationOptions::default(),
    )
    .map_err(|e| CliError::Runtime(format!("calibration failed: {e}")))
}

/// `power.tx_dbm` when present, otherwise calibrate on the fly.
pub fn resolve_tx_power(
    scenario: &ScenarioFile,
) -> Result<(f64, Option<CalibrationResult>), CliError> {
    match (scenario.power.tx_dbm, &scenario.power.calibrate) {
        (Some(tx), _) => Ok((tx, None)),
        (None, Some(_)) => {
            let c = calibrate(scenario)?;
            Ok((c.tx_power_dbm, Some(c)))
        }
        (None, None) => Err(CliError::Config(
            "power: set either power.tx_dbm or power.calibrate".into(),
        )),
    }
}
