//! Transmit-power calibration against a percentile anchor.

use serde::Serialize;

use crate::error::{Error, Result};

use super::{evaluate, sample_gains, Execution, SimulationConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationOptions {
    pub low_dbm: f64,
    pub high_dbm: f64,
    /// Stop once the percentile is within this many dB of the target.
    pub tolerance_db: f64,
    pub max_iterations: usize,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self {
            low_dbm: -30.0,
            high_dbm: 90.0,
            tolerance_db: 1e-3,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationResult {
    pub tx_power_dbm: f64,
    pub percentile: f64,
    pub target_db: f64,
    pub achieved_db: f64,
    pub iterations: usize,
}

/// Bisection on `tx_power_dbm` until the `target_percentile` quantile of the
/// SINR/SNR distribution hits `target_db`.
///
/// User positions are drawn once from the template's seed and reused for
/// every candidate power. The quantile must be non-decreasing in power,
/// which holds for both deployments; the typical deployment saturates at its
/// interference-limited SIR, so high targets there fail to bracket.
pub fn calibrate_tx_power(
    template: &SimulationConfig,
    target_percentile: f64,
    target_db: f64,
    opts: CalibrationOptions,
) -> Result<CalibrationResult> {
    if !(0.0..=1.0).contains(&target_percentile) {
        return Err(Error::invalid(
            "percentile",
            format!("{target_percentile} not in [0, 1]"),
        ));
    }
    if opts.low_dbm.partial_cmp(&opts.high_dbm) != Some(std::cmp::Ordering::Less) {
        return Err(Error::invalid(
            "calibration bracket",
            "low must be below high",
        ));
    }
    let samples = sample_gains(template, Execution::default())?;
    let quantile = |tx: f64| -> Result<f64> {
        evaluate(&template.with_tx_power(tx), &samples)?
            .sinr_db
            .percentile(target_percentile)
    };

    let (mut lo, mut hi) = (opts.low_dbm, opts.high_dbm);
    let (f_lo, f_hi) = (quantile(lo)?, quantile(hi)?);
    if !(f_lo - opts.tolerance_db <= target_db && target_db <= f_hi + opts.tolerance_db) {
        return Err(Error::NotBracketed {
            percentile: target_percentile,
            target_db,
            low_dbm: lo,
            high_dbm: hi,
            low_value_db: f_lo,
            high_value_db: f_hi,
        });
    }

    let mut iterations = 0;
    let (mut best_tx, mut best_val) = if (f_lo - target_db).abs() < (f_hi - target_db).abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    while (best_val - target_db).abs() > opts.tolerance_db && iterations < opts.max_iterations {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let v = quantile(mid)?;
        if (v - target_db).abs() < (best_val - target_db).abs() {
            best_tx = mid;
            best_val = v;
        }
        if v < target_db {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    log::debug!("calibrated {best_tx:.4} dBm -> {best_val:.4} dB after {iterations} steps");
    Ok(CalibrationResult {
        tx_power_dbm: best_tx,
        percentile: target_percentile,
        target_db,
        achieved_db: best_val,
        iterations,
    })
}
