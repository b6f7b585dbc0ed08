//! JSON scenario files.
//!
//! Unknown keys are rejected at every level. A run manifest is accepted in
//! place of a scenario: its `resolved_config` is used.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spectra_core::geometry::{build_grid_layout, Point2D, UserRegion};
use spectra_core::linklevel::RankDistribution;
use spectra_core::montecarlo::{Deployment, SePipeline, SimulationConfig, UserPlacement};
use spectra_core::propagation::{NoiseConfig, PathLossModel, DEFAULT_CARRIER_HZ, DEFAULT_EXPONENT};
use spectra_core::rue::{compute_rue, preset, rank_factor};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub geometry: GeometrySection,
    #[serde(default)]
    pub propagation: PropagationSection,
    #[serde(default)]
    pub power: PowerSection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<PipelineSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<BandwidthSection>,
    #[serde(default)]
    pub outputs: OutputsSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub rows: usize,
    pub cols: usize,
    pub isd_m: f64,
    pub exclusion_m: f64,
    /// Pin every user to this `[x, y]` instead of sampling the center cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub user_position: Option<[f64; 2]>,
}

impl Default for GeometrySection {
    fn default() -> Self {
        Self {
            rows: 3,
            cols: 3,
            isd_m: 200.0,
            exclusion_m: 5.0,
            user_position: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fspl_1m_db: Option<f64>,
    pub exponent_n: f64,
    pub nf_db: f64,
    pub bw_mhz: f64,
}

impl Default for PropagationSection {
    fn default() -> Self {
        Self {
            carrier_ghz: Some(DEFAULT_CARRIER_HZ / 1e9),
            fspl_1m_db: None,
            exponent_n: DEFAULT_EXPONENT,
            nf_db: 5.0,
            bw_mhz: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PowerSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tx_dbm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibrate: Option<CalibrateSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateSection {
    pub percentile: f64,
    pub target_db: f64,
    #[serde(default = "default_calibration_deployment")]
    pub deployment: Deployment,
}

fn default_calibration_deployment() -> Deployment {
    Deployment::CellFree
}

impl Default for CalibrateSection {
    fn default() -> Self {
        Self {
            percentile: 0.1,
            target_db: 6.6,
            deployment: Deployment::CellFree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub n_samples: usize,
    pub seed: u64,
    pub deployments: Vec<Deployment>,
}

impl Default for SimulationSection {
    fn default() -> Self {
        Self {
            n_samples: 100_000,
            seed: 1,
            deployments: Deployment::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineSection {
    pub rank_distribution: BTreeMap<u32, f64>,
    #[serde(default = "default_max_layers")]
    pub max_layers: u32,
    #[serde(default)]
    pub il_db: Vec<f64>,
    pub rue_preset: String,
}

fn default_max_layers() -> u32 {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandwidthSection {
    /// MHz.
    pub bw_list: Vec<f64>,
    /// Meters from the serving O-RU.
    pub distances: Vec<f64>,
    #[serde(default = "default_layers")]
    pub layers: Vec<u32>,
    #[serde(default = "default_carriers")]
    pub carriers: Vec<u32>,
    #[serde(default = "default_ca_layers")]
    pub ca_layers: u32,
}

fn default_layers() -> Vec<u32> {
    spectra_core::bandwidth::DEFAULT_LAYERS.to_vec()
}

fn default_carriers() -> Vec<u32> {
    spectra_core::bandwidth::DEFAULT_CARRIERS.to_vec()
}

fn default_ca_layers() -> u32 {
    2
}

impl Default for BandwidthSection {
    fn default() -> Self {
        Self {
            bw_list: spectra_core::bandwidth::DEFAULT_BW_LIST_HZ
                .map(|b| b / 1e6)
                .to_vec(),
            distances: spectra_core::bandwidth::DEFAULT_DISTANCES_M.to_vec(),
            layers: default_layers(),
            carriers: default_carriers(),
            ca_layers: default_ca_layers(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    pub directory: String,
    pub formats: Vec<Format>,
}

impl Default for OutputsSection {
    fn default() -> Self {
        Self {
            directory: "out".into(),
            formats: vec![Format::Csv],
        }
    }
}

/// Pipeline with the preset resolved to an RUE value.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedPipeline {
    pub rank: RankDistribution,
    pub max_layers: u32,
    pub il_db: Vec<f64>,
    pub rue_preset: String,
    pub rue: f64,
}

impl ResolvedPipeline {
    pub fn stage(&self, il_db: f64) -> SePipeline {
        SePipeline {
            rank: self.rank.clone(),
            il_db,
            rue: self.rue,
        }
    }
}

fn config_err(key: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key}: {err}"))
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(inner) = value.get_mut("resolved_config") {
            value = inner.take();
        }
        let scenario: ScenarioFile =
            serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.layout()?;
        self.pathloss()?;
        self.noise()?;
        if self.simulation.n_samples == 0 {
            return Err(config_err("simulation.n_samples", "must be >= 1"));
        }
        if self.simulation.deployments.is_empty() {
            return Err(config_err(
                "simulation.deployments",
                "at least one deployment",
            ));
        }
        if let Some(c) = &self.power.calibrate {
            if !(0.0..=1.0).contains(&c.percentile) {
                return Err(config_err(
                    "power.calibrate.percentile",
                    "must lie in [0, 1]",
                ));
            }
        }
        if let Some(tx) = self.power.tx_dbm {
            if !tx.is_finite() {
                return Err(config_err("power.tx_dbm", "must be finite"));
            }
        }
        self.pipeline()?;
        if let Some(b) = &self.bandwidth {
            if b.bw_list.is_empty() || b.bw_list.iter().any(|&bw| bw.is_nan() || bw <= 0.0) {
                return Err(config_err(
                    "bandwidth.bw_list",
                    "non-empty list of positive MHz values",
                ));
            }
            if b.distances.is_empty() || b.distances.iter().any(|&d| d.is_nan() || d < 1.0) {
                return Err(config_err(
                    "bandwidth.distances",
                    "non-empty list of distances >= 1 m",
                ));
            }
            if b.layers.contains(&0) || b.carriers.contains(&0) || b.ca_layers == 0 {
                return Err(config_err(
                    "bandwidth",
                    "layer and carrier counts must be >= 1",
                ));
            }
        }
        if self.outputs.formats.is_empty() {
            return Err(config_err("outputs.formats", "at least one format"));
        }
        // builds the full config, catching region/exclusion problems
        self.simulation_config(Deployment::CellFree, 0.0)?;
        Ok(())
    }

    pub fn layout(&self) -> Result<spectra_core::geometry::CellLayout, CliError> {
        let g = &self.geometry;
        build_grid_layout(g.rows, g.cols, g.isd_m).map_err(|e| config_err("geometry", e))
    }

    pub fn pathloss(&self) -> Result<PathLossModel, CliError> {
        let p = &self.propagation;
        let model = match (p.carrier_ghz, p.fspl_1m_db) {
            (Some(_), Some(_)) => {
                return Err(config_err(
                    "propagation",
                    "give either carrier_ghz or fspl_1m_db, not both",
                ))
            }
            (None, Some(fspl)) => PathLossModel::new(p.exponent_n, fspl),
            (Some(ghz), None) => PathLossModel::from_carrier(ghz * 1e9, p.exponent_n),
            (None, None) => PathLossModel::from_carrier(DEFAULT_CARRIER_HZ, p.exponent_n),
        };
        model.map_err(|e| config_err("propagation", e))
    }

    pub fn noise(&self) -> Result<NoiseConfig, CliError> {
        NoiseConfig::new(self.propagation.bw_mhz * 1e6, self.propagation.nf_db)
            .map_err(|e| config_err("propagation", e))
    }

    pub fn pipeline(&self) -> Result<Option<ResolvedPipeline>, CliError> {
        let Some(p) = &self.pipeline else {
            return Ok(None);
        };
        let rank = RankDistribution::new(p.rank_distribution.iter().map(|(&r, &q)| (r, q)))
            .map_err(|e| config_err("pipeline.rank_distribution", e))?;
        rank_factor(&rank, p.max_layers).map_err(|e| config_err("pipeline.max_layers", e))?;
        let preset = preset(&p.rue_preset).map_err(|e| config_err("pipeline.rue_preset", e))?;
        let rue = compute_rue(&preset.config).map_err(|e| config_err("pipeline.rue_preset", e))?;
        if let Some(bad) = p.il_db.iter().find(|&&il| il.is_nan() || il < 0.0) {
            return Err(config_err(
                "pipeline.il_db",
                format!("must be >= 0, got {bad}"),
            ));
        }
        Ok(Some(ResolvedPipeline {
            rank,
            max_layers: p.max_layers,
            il_db: p.il_db.clone(),
            rue_preset: preset.name.to_string(),
            rue,
        }))
    }

    pub fn simulation_config(
        &self,
        deployment: Deployment,
        tx_power_dbm: f64,
    ) -> Result<SimulationConfig, CliError> {
        let layout = self.layout()?;
        let placement = match self.geometry.user_position {
            Some([x, y]) => UserPlacement::Pinned(Point2D::new(x, y)),
            None => UserPlacement::Region(
                UserRegion::center_cell(&layout, self.geometry.exclusion_m)
                    .map_err(|e| config_err("geometry.exclusion_m", e))?,
            ),
        };
        let cfg = SimulationConfig {
            layout,
            pathloss: self.pathloss()?,
            tx_power_dbm,
            noise: self.noise()?,
            deployment,
            placement,
            n_samples: self.simulation.n_samples,
            seed: self.simulation.seed,
            se_pipeline: None,
        };
        cfg.validate().map_err(|e| config_err("geometry", e))?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_uses_defaults() {
        let s = ScenarioFile::parse("{}").unwrap();
        assert_eq!(s.geometry.rows, 3);
        assert_eq!(s.simulation.n_samples, 100_000);
        assert!(s.power.tx_dbm.is_none());
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ScenarioFile::parse(
            r#"{"geometry":{"rows":3,"cols":3,"isd_m":200,"exclusion_m":5,"hex":true}}"#,
        )
        .unwrap_err();
        assert!(
            matches!(err, CliError::Config(ref m) if m.contains("hex")),
            "{err}"
        );
        assert!(ScenarioFile::parse(r#"{"extra":{}}"#).is_err());
    }

    #[test]
    fn unknown_preset_rejected() {
        let err = ScenarioFile::parse(
            r#"{"pipeline":{"rank_distribution":{"2":0.6,"4":0.4},"rue_preset":"6g-magic"}}"#,
        )
        .unwrap_err();
        assert!(
            matches!(err, CliError::Config(ref m) if m.contains("pipeline.rue_preset")),
            "{err}"
        );
    }

    #[test]
    fn bad_values_name_the_key() {
        let cases = [
            (
                r#"{"simulation":{"n_samples":0,"seed":1,"deployments":["cell_free"]}}"#,
                "simulation.n_samples",
            ),
            (
                r#"{"propagation":{"carrier_ghz":3.5,"fspl_1m_db":43,"exponent_n":3.52,"nf_db":5,"bw_mhz":100}}"#,
                "propagation",
            ),
            (
                r#"{"geometry":{"rows":0,"cols":3,"isd_m":200,"exclusion_m":5}}"#,
                "geometry",
            ),
            (
                r#"{"pipeline":{"rank_distribution":{"8":1.0},"rue_preset":"5g-baseline"}}"#,
                "pipeline.max_layers",
            ),
        ];
        for (text, key) in cases {
            match ScenarioFile::parse(text) {
                Err(CliError::Config(msg)) => assert!(msg.contains(key), "{msg} lacks {key}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn manifest_is_accepted() {
        let s = ScenarioFile::default();
        let manifest = serde_json::json!({ "tool": "x", "resolved_config": s });
        assert_eq!(ScenarioFile::parse(&manifest.to_string()).unwrap(), s);
    }
}
