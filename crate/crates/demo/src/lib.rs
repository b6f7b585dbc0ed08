//! Browser bindings for the interactive page in `www/`.
//!
//! Every export returns a JSON string; the page parses it and draws the
//! curves on a canvas. The `*_json` functions hold the logic and are plain
//! Rust so they can be tested natively.

use serde::Serialize;
use spectra_core::bandwidth::{
    ca_curve, field_trial_se, nr_bandwidth_family, peak_cell_rate, shannon_asymptote, sweep_bw,
    BwSweepRow, CurvePoint, FIELD_TRIAL_MU_MIMO_MBPS, FIELD_TRIAL_SU_MIMO_MBPS,
};
use spectra_core::geometry::build_grid_layout;
use spectra_core::montecarlo::{
    compare_deployments, evaluate, sample_gains, ComparisonRow, Deployment, EmpiricalDistribution,
    Execution, SimulationConfig, TABLE_I_PERCENTILES,
};
use spectra_core::propagation::{NoiseConfig, PathLossModel, NOISE_DENSITY_DBM_PER_HZ};
use spectra_core::rue::{
    compute_rue, rue_breakdown, RadioResourceConfig, RueFactor, NR_100MHZ_OCCUPIED_HZ, PRESETS,
};
use wasm_bindgen::prelude::*;

/// Points per plotted CDF; enough for a smooth line at any sample count.
const CDF_POINTS: usize = 201;

/// Upper bound on samples so the page stays responsive.
pub const MAX_SAMPLES: usize = 200_000;

type DemoResult = Result<String, String>;

fn to_json<T: Serialize>(value: &T) -> DemoResult {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn presets_json() -> DemoResult {
    to_json(&PRESETS)
}

#[derive(Serialize)]
struct RueReport {
    factors: [RueFactor; 5],
    rue: f64,
}

pub fn rue_json(config: &str) -> DemoResult {
    let cfg: RadioResourceConfig = serde_json::from_str(config).map_err(|e| e.to_string())?;
    let factors = rue_breakdown(&cfg).map_err(|e| e.to_string())?;
    let rue = compute_rue(&cfg).map_err(|e| e.to_string())?;
    to_json(&RueReport { factors, rue })
}

#[derive(Serialize)]
struct Curve {
    deployment: &'static str,
    /// `[cdf, value]` pairs at evenly spaced probabilities.
    sinr_db: Vec<[f64; 2]>,
    se: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct SimulationReport {
    curves: Vec<Curve>,
    comparison: Vec<ComparisonRow>,
}

fn resample(d: &EmpiricalDistribution) -> Result<Vec<[f64; 2]>, String> {
    (0..CDF_POINTS)
        .map(|i| {
            let p = i as f64 / (CDF_POINTS - 1) as f64;
            d.percentile(p).map(|v| [p, v]).map_err(|e| e.to_string())
        })
        .collect()
}

/// Typical cellular and cell-free CDFs over a `grid`×`grid` layout, both on
/// the same user drops.
pub fn simulate_json(
    grid: usize,
    isd_m: f64,
    exponent_n: f64,
    tx_power_dbm: f64,
    n_samples: usize,
    seed: u64,
) -> DemoResult {
    if n_samples > MAX_SAMPLES {
        return Err(format!("n_samples above {MAX_SAMPLES}"));
    }
    let err = |e: spectra_core::Error| e.to_string();
    let layout = build_grid_layout(grid, grid, isd_m).map_err(err)?;
    let pathloss =
        PathLossModel::from_carrier(spectra_core::propagation::DEFAULT_CARRIER_HZ, exponent_n)
            .map_err(err)?;
    let mut results = Vec::new();
    let mut samples = None;
    for deployment in Deployment::ALL {
        let cfg = SimulationConfig::center_cell(
            layout.clone(),
            pathloss,
            tx_power_dbm,
            NoiseConfig::default(),
            deployment,
            5.0,
            n_samples,
            seed,
        )
        .map_err(err)?;
        if samples.is_none() {
            samples = Some(sample_gains(&cfg, Execution::Serial).map_err(err)?);
        }
        results.push(evaluate(&cfg, samples.as_ref().expect("sampled above")).map_err(err)?);
    }
    let comparison =
        compare_deployments(&results[0], &results[1], &TABLE_I_PERCENTILES).map_err(err)?;
    let curves = results
        .iter()
        .map(|r| {
            Ok(Curve {
                deployment: r.deployment.name(),
                sinr_db: resample(&r.sinr_db)?,
                se: resample(&r.se)?,
            })
        })
        .collect::<Result<_, String>>()?;
    to_json(&SimulationReport {
        curves,
        comparison: comparison.rows,
    })
}

#[derive(Serialize)]
struct Asymptote {
    distance_m: f64,
    rate_bps: f64,
}

#[derive(Serialize)]
struct BandwidthReport {
    sweep: Vec<BwSweepRow>,
    asymptotes: Vec<Asymptote>,
    layers: Vec<CurvePoint>,
    carrier_aggregation: Vec<CurvePoint>,
    field_trials: Vec<[f64; 2]>,
}

/// Shannon rate against bandwidth at each distance, plus the peak-rate
/// curves of the NR carrier family.
pub fn bandwidth_json(distances_m: &[f64], tx_power_dbm: f64, nf_db: f64) -> DemoResult {
    let err = |e: spectra_core::Error| e.to_string();
    let pathloss = PathLossModel::default();
    let family = nr_bandwidth_family();
    let bws: Vec<f64> = family.iter().map(|n| n.nominal_bw_hz).collect();
    let sweep = sweep_bw(distances_m, &bws, &pathloss, tx_power_dbm, nf_db).map_err(err)?;
    let n0 = NOISE_DENSITY_DBM_PER_HZ + nf_db;
    let asymptotes = distances_m
        .iter()
        .map(|&d| {
            let s_r = tx_power_dbm - pathloss.path_loss_db(d)?;
            Ok(Asymptote {
                distance_m: d,
                rate_bps: shannon_asymptote(s_r, n0),
            })
        })
        .collect::<Result<_, spectra_core::Error>>()
        .map_err(err)?;
    let mut layers = Vec::new();
    for num in &family {
        for l in [1, 2, 4, 8, 16] {
            layers.push(peak_cell_rate(num, l).map_err(err)?);
        }
    }
    let carrier_aggregation = ca_curve(&family[0], 2, &[1, 2, 4, 8]).map_err(err)?;
    let field_trials = [FIELD_TRIAL_SU_MIMO_MBPS, FIELD_TRIAL_MU_MIMO_MBPS]
        .into_iter()
        .map(|mbps| {
            Ok([
                mbps * 1e6,
                field_trial_se(mbps, NR_100MHZ_OCCUPIED_HZ / 1e6)?,
            ])
        })
        .collect::<Result<_, spectra_core::Error>>()
        .map_err(err)?;
    to_json(&BandwidthReport {
        sweep,
        asymptotes,
        layers,
        carrier_aggregation,
        field_trials,
    })
}

fn js(r: DemoResult) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn presets() -> Result<String, JsError> {
    js(presets_json())
}

/// Breakdown of a resource configuration given as JSON.
#[wasm_bindgen]
pub fn rue(config: &str) -> Result<String, JsError> {
    js(rue_json(config))
}

#[wasm_bindgen]
pub fn simulate(
    grid: usize,
    isd_m: f64,
    exponent_n: f64,
    tx_power_dbm: f64,
    n_samples: usize,
    seed: u64,
) -> Result<String, JsError> {
    js(simulate_json(
        grid,
        isd_m,
        exponent_n,
        tx_power_dbm,
        n_samples,
        seed,
    ))
}

#[wasm_bindgen]
pub fn bandwidth(distances_m: &[f64], tx_power_dbm: f64, nf_db: f64) -> Result<String, JsError> {
    js(bandwidth_json(distances_m, tx_power_dbm, nf_db))
}
