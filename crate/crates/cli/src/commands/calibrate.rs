use std::path::PathBuf;

use spectra_core::montecarlo::{run_deployment, CalibrationResult};

use super::{calibrate, prepare_args};
use crate::output::OutputDir;
use crate::{CliError, RunArgs};

pub const GOLDEN_FILE: &str = "golden.json";

/// Calibrate, write `golden.json` (scenario with `power.tx_dbm` filled in)
/// and a manifest recording the achieved percentile.
pub fn run(args: &RunArgs) -> Result<(CalibrationResult, PathBuf), CliError> {
    let prepared = prepare_args(args)?;
    let mut scenario = prepared.scenario.clone();
    let spec = scenario.power.calibrate.clone().unwrap_or_default();
    scenario.power.calibrate = Some(spec.clone());
    let result = calibrate(&scenario)?;

    // independent re-run at the calibrated power, same seed
    let check = run_deployment(&scenario.simulation_config(spec.deployment, result.tx_power_dbm)?)?;
    let achieved = check.sinr_db.percentile(spec.percentile)?;

    scenario.power.tx_dbm = Some(result.tx_power_dbm);
    let mut out = OutputDir::create(&prepared.out)?;
    out.write_json(GOLDEN_FILE, &scenario)?;
    let record = serde_json::json!({
        "deployment": spec.deployment,
        "percentile": result.percentile,
        "target_db": result.target_db,
        "tx_power_dbm": result.tx_power_dbm,
        "achieved_db": achieved,
        "iterations": result.iterations,
    });
    let golden = out.path().join(GOLDEN_FILE);
    out.finish("calibrate", Some(&scenario), Some(record))?;
    println!(
        "calibrated {} p{:.0} = {:.3} dB at tx power {:.4} dBm -> {}",
        spec.deployment.name(),
        spec.percentile * 100.0,
        achieved,
        result.tx_power_dbm,
        golden.display()
    );
    Ok((result, golden))
}
