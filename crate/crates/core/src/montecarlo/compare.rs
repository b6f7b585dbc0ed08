use serde::Serialize;

use crate::error::{Error, Result};

use super::{DeploymentResult, Units};

/// CDF points reported in the deployment comparison table: the cell-edge
/// point (CDF 0.1, i.e. CCDF 90 %) and the cell-center point (CDF 0.9).
pub const TABLE_I_PERCENTILES: [f64; 2] = [0.1, 0.9];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    /// CDF level.
    pub percentile: f64,
    pub se_cellular: f64,
    pub se_cellfree: f64,
    pub se_ratio: f64,
    pub sinr_cellular_db: f64,
    pub snr_cellfree_db: f64,
    pub snr_delta_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn row(&self, percentile: f64) -> Option<&ComparisonRow> {
        self.rows
            .iter()
            .find(|r| (r.percentile - percentile).abs() < 1e-12)
    }
}

fn check_units(label: &str, a: Units, b: Units, expected: Units) -> Result<()> {
    if a != b || a != expected {
        return Err(Error::UnitMismatch {
            left: format!("{label} {a}"),
            right: format!("{label} {b}"),
        });
    }
    Ok(())
}

/// Per-percentile SE ratio (cell-free / cellular) and SNR−SINR gap.
pub fn compare_deployments(
    cellular: &DeploymentResult,
    cellfree: &DeploymentResult,
    percentiles: &[f64],
) -> Result<ComparisonReport> {
    check_units(
        "sinr",
        cellular.sinr_db.units(),
        cellfree.sinr_db.units(),
        Units::Db,
    )?;
    check_units(
        "se",
        cellular.se.units(),
        cellfree.se.units(),
        Units::BpsPerHz,
    )?;

    let rows = percentiles
        .iter()
        .map(|&p| {
            let se_cellular = cellular.se.percentile(p)?;
            let se_cellfree = cellfree.se.percentile(p)?;
            let sinr_cellular_db = cellular.sinr_db.percentile(p)?;
            let snr_cellfree_db = cellfree.sinr_db.percentile(p)?;
            Ok(ComparisonRow {
                percentile: p,
                se_cellular,
                se_cellfree,
                se_ratio: se_cellfree / se_cellular,
                sinr_cellular_db,
                snr_cellfree_db,
                snr_delta_db: snr_cellfree_db - sinr_cellular_db,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport { rows })
}
