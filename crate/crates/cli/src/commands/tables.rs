use std::path::{Path, PathBuf};

use spectra_core::montecarlo::Deployment;
use spectra_core::tables::{deterministic_tables, table_i, TableCell};

use super::{prepare, simulate::run_deployments};
use crate::output::{Cell, OutputDir};
use crate::scenario::{Format, ScenarioFile};
use crate::CliError;

/// Reference tables I-V plus the RUE presets. Table I needs the calibrated
/// (golden) scenario; a missing golden file is a runtime failure.
pub fn compute(
    scenario_path: &Path,
    seed: Option<u64>,
) -> Result<(ScenarioFile, Vec<TableCell>), CliError> {
    if !scenario_path.exists() {
        return Err(CliError::Runtime(format!(
            "golden config {} not found; run `spectra calibrate` first",
            scenario_path.display()
        )));
    }
    let mut scenario = ScenarioFile::load(scenario_path)?;
    if let Some(seed) = seed {
        scenario.simulation.seed = seed;
    }
    let tx = scenario.power.tx_dbm.ok_or_else(|| {
        CliError::Runtime(format!(
            "{}: power.tx_dbm missing, not a calibrated config",
            scenario_path.display()
        ))
    })?;
    scenario.simulation.deployments = Deployment::ALL.to_vec();
    let results = run_deployments(&scenario, tx)?;
    let mut cells = table_i(&results[0], &results[1])?;
    cells.extend(deterministic_tables()?);
    Ok((scenario, cells))
}

pub fn run(
    scenario_path: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
    format: Option<Format>,
) -> Result<Vec<TableCell>, CliError> {
    let (scenario, cells) = compute(scenario_path, seed)?;
    let prepared = prepare(scenario, out, None, format);

    let rows: Vec<Vec<Cell>> = cells
        .iter()
        .map(|c| {
            vec![
                c.table.into(),
                c.row.clone().into(),
                c.column.clone().into(),
                c.computed.into(),
                c.published.into(),
                c.delta().into(),
                c.tolerance
                    .map(Cell::Num)
                    .unwrap_or(Cell::Text(String::new())),
                c.passes().into(),
            ]
        })
        .collect();
    let mut out = OutputDir::create(&prepared.out)?;
    for &format in &prepared.formats {
        out.write_table(
            "tables",
            format,
            &[
                "table",
                "row",
                "column",
                "computed",
                "published",
                "delta",
                "tolerance",
                "pass",
            ],
            &rows,
        )?;
    }
    out.finish("tables", Some(&prepared.scenario), None)?;

    let mut failed = 0;
    for c in &cells {
        let status = match (c.tolerance, c.passes()) {
            (None, _) => "info",
            (Some(_), true) => "PASS",
            (Some(_), false) => "FAIL",
        };
        if !c.passes() {
            failed += 1;
        }
        println!(
            "[{status}] Table {:<3} {:<20} {:<18} computed {:>9.4}  published {:>8.3}  delta {:.4}",
            c.table,
            c.row,
            c.column,
            c.computed,
            c.published,
            c.delta()
        );
    }
    if failed > 0 {
        return Err(CliError::Runtime(format!(
            "{failed} table cells outside tolerance"
        )));
    }
    Ok(cells)
}
