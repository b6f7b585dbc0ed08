//! Monte-Carlo evaluation of user SINR/SNR and spectral efficiency over a
//! deployment.
//!
//! Users are dropped in fixed chunks of [`CHUNK_SIZE`]; chunk `i` draws from
//! a ChaCha8 stream seeded with `(seed, stream = i)`. Chunks are evaluated in
//! any order (in parallel with the `parallel` feature) and concatenated by
//! index, so the output does not depend on the worker count.

mod calibrate;
mod compare;
mod distribution;

pub use calibrate::{calibrate_tx_power, CalibrationOptions, CalibrationResult};
pub use compare::{compare_deployments, ComparisonReport, ComparisonRow, TABLE_I_PERCENTILES};
pub use distribution::{percentile, EmpiricalDistribution, Units};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, sample_user_position, CellLayout, Point2D, UserRegion};
use crate::linklevel::{
    cellfree_snr_parts, cellular_sinr_parts, real_world_se, se_siso, RankDistribution,
};
use crate::propagation::{NoiseConfig, PathLossModel, REFERENCE_DISTANCE_M};
use crate::{db_to_linear, linear_to_db};

pub const CHUNK_SIZE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Deployment {
    /// Center cell serves at full power, every other cell interferes.
    TypicalCellular,
    /// All cells serve coherently, each at `P_t / L`.
    CellFree,
}

impl Deployment {
    pub const ALL: [Deployment; 2] = [Deployment::TypicalCellular, Deployment::CellFree];

    pub fn name(&self) -> &'static str {
        match self {
            Deployment::TypicalCellular => "typical_cellular",
            Deployment::CellFree => "cell_free",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UserPlacement {
    /// Uniform over a region, away from every O-RU's exclusion disc.
    Region(UserRegion),
    /// Every sample at the same position.
    Pinned(Point2D),
}

/// Optional real-world SE mapping: `rue · E[layers] · log2(1 + lin(sinr − il))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SePipeline {
    pub rank: RankDistribution,
    pub il_db: f64,
    pub rue: f64,
}

impl SePipeline {
    pub fn validate(&self) -> Result<()> {
        if !(self.il_db >= 0.0 && self.il_db.is_finite()) {
            return Err(Error::invalid(
                "il_db",
                format!("must be >= 0, got {}", self.il_db),
            ));
        }
        if !(0.0..=1.0).contains(&self.rue) {
            return Err(Error::invalid(
                "rue",
                format!("must lie in [0, 1], got {}", self.rue),
            ));
        }
        Ok(())
    }

    pub fn se(&self, sinr_db: f64) -> f64 {
        real_world_se(self.rue, self.rank.expected_layers(), sinr_db, self.il_db)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub layout: CellLayout,
    pub pathloss: PathLossModel,
    /// Per-cell power for the typical deployment; total budget (split over
    /// the L cells) for cell-free.
    pub tx_power_dbm: f64,
    pub noise: NoiseConfig,
    pub deployment: Deployment,
    pub placement: UserPlacement,
    pub n_samples: usize,
    pub seed: u64,
    pub se_pipeline: Option<SePipeline>,
}

impl SimulationConfig {
    /// Users dropped over the center cell (side = ISD) with an exclusion
    /// radius around every O-RU.
    #[allow(clippy::too_many_arguments)]
    pub fn center_cell(
        layout: CellLayout,
        pathloss: PathLossModel,
        tx_power_dbm: f64,
        noise: NoiseConfig,
        deployment: Deployment,
        exclusion_radius_m: f64,
        n_samples: usize,
        seed: u64,
    ) -> Result<Self> {
        let region = UserRegion::center_cell(&layout, exclusion_radius_m)?;
        let cfg = Self {
            layout,
            pathloss,
            tx_power_dbm,
            noise,
            deployment,
            placement: UserPlacement::Region(region),
            n_samples,
            seed,
            se_pipeline: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::invalid("n_samples", "must be >= 1"));
        }
        if !self.tx_power_dbm.is_finite() {
            return Err(Error::invalid("tx_power_dbm", "must be finite"));
        }
        if let UserPlacement::Region(region) = &self.placement {
            // anything closer than the reference distance is outside the path loss model
            if region.exclusion_radius_m() < REFERENCE_DISTANCE_M {
                return Err(Error::invalid(
                    "exclusion_radius_m",
                    format!(
                        "{} m is below the {REFERENCE_DISTANCE_M} m path loss reference distance",
                        region.exclusion_radius_m()
                    ),
                ));
            }
        }
        if let Some(p) = &self.se_pipeline {
            p.validate()?;
        }
        Ok(())
    }

    pub fn with_tx_power(&self, tx_power_dbm: f64) -> Self {
        Self {
            tx_power_dbm,
            ..self.clone()
        }
    }
}

/// Per-user channel gains to every O-RU, in sample order.
#[derive(Debug, Clone, PartialEq)]
pub struct GainSamples {
    cells: usize,
    center_index: usize,
    positions: Vec<Point2D>,
    gains: Vec<f64>,
}

impl GainSamples {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Point2D] {
        &self.positions
    }

    /// Linear |h_l|² for sample `i`, in layout order.
    pub fn gains(&self, i: usize) -> &[f64] {
        &self.gains[i * self.cells..(i + 1) * self.cells]
    }

    /// Linear SINR (typical) or SNR (cell-free) per sample, sample order.
    pub fn link_quality(
        &self,
        deployment: Deployment,
        tx_power_dbm: f64,
        noise: &NoiseConfig,
    ) -> Vec<f64> {
        let tx_mw = db_to_linear(tx_power_dbm);
        let noise_mw = noise.power_mw();
        (0..self.len())
            .map(|i| {
                let g = self.gains(i);
                match deployment {
                    Deployment::TypicalCellular => {
                        let serving = g[self.center_index];
                        let interference: f64 = g
                            .iter()
                            .enumerate()
                            .filter(|&(l, _)| l != self.center_index)
                            .map(|(_, &v)| v)
                            .sum();
                        cellular_sinr_parts(serving, interference, tx_mw, noise_mw)
                    }
                    Deployment::CellFree => {
                        cellfree_snr_parts(g.iter().sum(), self.cells, tx_mw, noise_mw)
                    }
                }
            })
            .collect()
    }

    /// Serving-cell SNR with interference removed, per sample.
    pub fn serving_snr(&self, tx_power_dbm: f64, noise: &NoiseConfig) -> Vec<f64> {
        let tx_mw = db_to_linear(tx_power_dbm);
        let noise_mw = noise.power_mw();
        (0..self.len())
            .map(|i| cellular_sinr_parts(self.gains(i)[self.center_index], 0.0, tx_mw, noise_mw))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

fn sample_chunk(cfg: &SimulationConfig, chunk: usize) -> Result<(Vec<Point2D>, Vec<f64>)> {
    let start = chunk * CHUNK_SIZE;
    let count = CHUNK_SIZE.min(cfg.n_samples - start);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chunk as u64);

    let cells = cfg.layout.len();
    let mut positions = Vec::with_capacity(count);
    let mut gains = Vec::with_capacity(count * cells);
    for _ in 0..count {
        let p = match &cfg.placement {
            UserPlacement::Region(region) => sample_user_position(region, &cfg.layout, &mut rng),
            UserPlacement::Pinned(p) => *p,
        };
        for oru in cfg.layout.positions() {
            gains.push(cfg.pathloss.channel_gain_linear(distance(&p, oru))?);
        }
        positions.push(p);
    }
    Ok((positions, gains))
}

/// Draw user positions and their gains to every O-RU.
pub fn sample_gains(cfg: &SimulationConfig, execution: Execution) -> Result<GainSamples> {
    cfg.validate()?;
    let chunks = cfg.n_samples.div_ceil(CHUNK_SIZE);

    let parts: Vec<Result<(Vec<Point2D>, Vec<f64>)>> = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..chunks)
                .into_par_iter()
                .map(|c| sample_chunk(cfg, c))
                .collect()
        }
        _ => (0..chunks).map(|c| sample_chunk(cfg, c)).collect(),
    };

    let mut positions = Vec::with_capacity(cfg.n_samples);
    let mut gains = Vec::with_capacity(cfg.n_samples * cfg.layout.len());
    for part in parts {
        let (p, g) = part?;
        positions.extend(p);
        gains.extend(g);
    }
    Ok(GainSamples {
        cells: cfg.layout.len(),
        center_index: cfg.layout.center_index(),
        positions,
        gains,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentResult {
    pub deployment: Deployment,
    /// SINR (typical) or SNR (cell-free), dB.
    pub sinr_db: EmpiricalDistribution,
    /// SISO Shannon SE, or the real-world SE when a pipeline is configured.
    pub se: EmpiricalDistribution,
}

impl DeploymentResult {
    fn from_link_quality(
        deployment: Deployment,
        quality: &[f64],
        pipeline: Option<&SePipeline>,
    ) -> Result<Self> {
        let sinr_db = quality.iter().map(|&q| linear_to_db(q)).collect();
        let se = match pipeline {
            None => quality.iter().map(|&q| se_siso(q)).collect(),
            Some(p) => quality.iter().map(|&q| p.se(linear_to_db(q))).collect(),
        };
        Ok(Self {
            deployment,
            sinr_db: EmpiricalDistribution::new(sinr_db, Units::Db)?,
            se: EmpiricalDistribution::new(se, Units::BpsPerHz)?,
        })
    }
}

/// Evaluate a deployment on already-sampled gains.
pub fn evaluate(cfg: &SimulationConfig, samples: &GainSamples) -> Result<DeploymentResult> {
    let quality = samples.link_quality(cfg.deployment, cfg.tx_power_dbm, &cfg.noise);
    DeploymentResult::from_link_quality(cfg.deployment, &quality, cfg.se_pipeline.as_ref())
}

pub fn run_deployment(cfg: &SimulationConfig) -> Result<DeploymentResult> {
    run_deployment_with(cfg, Execution::default())
}

pub fn run_deployment_with(
    cfg: &SimulationConfig,
    execution: Execution,
) -> Result<DeploymentResult> {
    let samples = sample_gains(cfg, execution)?;
    evaluate(cfg, &samples)
}
