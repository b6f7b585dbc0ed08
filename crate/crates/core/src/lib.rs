//! Downlink spectral-efficiency toolkit.
//!
//! Compares a typical cellular deployment (one serving cell, the rest
//! interfering) against a cell-free deployment (every radio unit serves the
//! user with a share of the power budget), then layers MIMO rank weighting,
//! implementation loss and radio-resource utilization efficiency (RUE) on
//! top of the Shannon spectral efficiency. The [`bandwidth`] module covers
//! throughput against transmission bandwidth, layers and carrier aggregation.
//!
//! All link math is done in linear power units; dB/dBm appear only at the
//! edges (configuration and reporting).

pub mod bandwidth;
pub mod error;
pub mod geometry;
pub mod linklevel;
pub mod montecarlo;
pub mod propagation;
pub mod rue;
pub mod tables;

pub use error::{Error, Result};

/// Convert a power ratio in dB to linear.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear power ratio to dB.
#[inline]
pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}
