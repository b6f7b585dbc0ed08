use std::collections::BTreeMap;

use serde::Serialize;
use spectra_core::db_to_linear;
use spectra_core::linklevel::{rank_weighted_se, real_world_se, se_mimo_upper};
use spectra_core::montecarlo::{
    compare_deployments, evaluate, sample_gains, ComparisonRow, Deployment, DeploymentResult,
    EmpiricalDistribution, Execution, Units, TABLE_I_PERCENTILES,
};

use super::{prepare_args, resolve_tx_power, Prepared};
use crate::output::{Cell, OutputDir};
use crate::scenario::{ResolvedPipeline, ScenarioFile};
use crate::{CliError, RunArgs};

/// Percentiles reported for every distribution in the summary.
pub const SUMMARY_PERCENTILES: [f64; 3] = [0.1, 0.5, 0.9];

#[derive(Debug, Clone, Serialize)]
pub struct Quantiles {
    pub p10: f64,
    pub p50: f64,
    pub p90: f64,
}

impl Quantiles {
    fn of(d: &EmpiricalDistribution) -> Result<Self, CliError> {
        let [p10, p50, p90] = SUMMARY_PERCENTILES;
        Ok(Self {
            p10: d.percentile(p10)?,
            p50: d.percentile(p50)?,
            p90: d.percentile(p90)?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeploymentSummary {
    pub sinr_db: Quantiles,
    pub se: Quantiles,
    /// Rank/RUE/IL stages when a pipeline is configured.
    pub stages: BTreeMap<String, Quantiles>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub tx_power_dbm: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub deployments: BTreeMap<String, DeploymentSummary>,
    pub comparison: Vec<ComparisonRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub se_ratio_cdf10: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub se_ratio_cdf90: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_delta_cdf10_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_delta_cdf90_db: Option<f64>,
}

/// Both deployments on the same user drops.
pub fn run_deployments(
    scenario: &ScenarioFile,
    tx_power_dbm: f64,
) -> Result<Vec<DeploymentResult>, CliError> {
    let deployments = &scenario.simulation.deployments;
    let base = scenario.simulation_config(deployments[0], tx_power_dbm)?;
    let samples = sample_gains(&base, Execution::default())?;
    deployments
        .iter()
        .map(|&d| {
            let cfg = scenario.simulation_config(d, tx_power_dbm)?;
            Ok(evaluate(&cfg, &samples)?)
        })
        .collect()
}

type Stage<'a> = (String, Box<dyn Fn(f64) -> f64 + 'a>);

fn il_label(il_db: f64) -> String {
    format!("se_rw_il{il_db}db")
}

/// Named SE curves derived from an SINR value (dB): MIMO bound, rank
/// weighting, RUE, and RUE·rank with each implementation loss.
fn stage_functions(p: &ResolvedPipeline) -> Vec<Stage<'_>> {
    let mut stages: Vec<Stage<'_>> = vec![
        (
            "se_mimo_ideal".into(),
            Box::new(move |s| se_mimo_upper(db_to_linear(s), p.max_layers)),
        ),
        (
            "se_mimo_rank".into(),
            Box::new(move |s| rank_weighted_se(&p.rank, db_to_linear(s))),
        ),
        (
            "se_rue".into(),
            Box::new(move |s| p.rue * se_mimo_upper(db_to_linear(s), p.max_layers)),
        ),
        (
            "se_rue_rank".into(),
            Box::new(move |s| real_world_se(p.rue, p.rank.expected_layers(), s, 0.0)),
        ),
    ];
    for &il in &p.il_db {
        stages.push((
            il_label(il),
            Box::new(move |s| real_world_se(p.rue, p.rank.expected_layers(), s, il)),
        ));
    }
    stages
}

fn cdf_rows(d: &EmpiricalDistribution) -> Vec<Vec<Cell>> {
    d.cdf_points()
        .map(|(c, v)| vec![c.into(), v.into()])
        .collect()
}

pub fn execute(prepared: &Prepared) -> Result<Summary, CliError> {
    let scenario = &prepared.scenario;
    let (tx, calibration) = resolve_tx_power(scenario)?;
    let pipeline = scenario.pipeline()?;
    let results = run_deployments(scenario, tx)?;

    let mut out = OutputDir::create(&prepared.out)?;
    let mut deployments = BTreeMap::new();
    for r in &results {
        let name = r.deployment.name();
        let mut stages = BTreeMap::new();
        for &format in &prepared.formats {
            out.write_table(
                &format!("{name}_sinr_db"),
                format,
                &["cdf", "value"],
                &cdf_rows(&r.sinr_db),
            )?;
            out.write_table(
                &format!("{name}_se"),
                format,
                &["cdf", "value"],
                &cdf_rows(&r.se),
            )?;
        }
        if let Some(p) = &pipeline {
            for (label, f) in stage_functions(p) {
                let dist = r.sinr_db.map(Units::BpsPerHz, &f)?;
                for &format in &prepared.formats {
                    out.write_table(
                        &format!("{name}_{label}"),
                        format,
                        &["cdf", "value"],
                        &cdf_rows(&dist),
                    )?;
                }
                stages.insert(label, Quantiles::of(&dist)?);
            }
        }
        deployments.insert(
            name.to_string(),
            DeploymentSummary {
                sinr_db: Quantiles::of(&r.sinr_db)?,
                se: Quantiles::of(&r.se)?,
                stages,
            },
        );
    }

    if let Some(p) = &pipeline {
        let stages = stage_functions(p);
        let mut headers = vec!["snr_db"];
        headers.extend(stages.iter().map(|(l, _)| l.as_str()));
        let rows: Vec<Vec<Cell>> = (-20..=80)
            .map(|i| {
                let snr = i as f64 * 0.5;
                std::iter::once(Cell::Num(snr))
                    .chain(stages.iter().map(|(_, f)| Cell::Num(f(snr))))
                    .collect()
            })
            .collect();
        for &format in &prepared.formats {
            out.write_table("se_vs_snr", format, &headers, &rows)?;
        }
    }

    let cellular = results
        .iter()
        .find(|r| r.deployment == Deployment::TypicalCellular);
    let cellfree = results
        .iter()
        .find(|r| r.deployment == Deployment::CellFree);
    let comparison = match (cellular, cellfree) {
        (Some(a), Some(b)) => compare_deployments(a, b, &TABLE_I_PERCENTILES)?.rows,
        _ => Vec::new(),
    };
    let at = |p: f64| comparison.iter().find(|r| r.percentile == p);
    let summary = Summary {
        tx_power_dbm: tx,
        n_samples: scenario.simulation.n_samples,
        seed: scenario.simulation.seed,
        deployments,
        se_ratio_cdf10: at(0.1).map(|r| r.se_ratio),
        se_ratio_cdf90: at(0.9).map(|r| r.se_ratio),
        snr_delta_cdf10_db: at(0.1).map(|r| r.snr_delta_db),
        snr_delta_cdf90_db: at(0.9).map(|r| r.snr_delta_db),
        comparison,
    };
    out.write_json("summary.json", &summary)?;
    let calibration = calibration.map(|c| serde_json::to_value(c).expect("serializable"));
    out.finish("simulate", Some(scenario), calibration)?;
    Ok(summary)
}

pub fn run(args: &RunArgs) -> Result<Summary, CliError> {
    let summary = execute(&prepare_args(args)?)?;
    for (name, d) in &summary.deployments {
        println!(
            "{name:>17}: SINR p10 {:7.2} dB  p90 {:7.2} dB | SE p10 {:6.3}  p90 {:6.3} bps/Hz",
            d.sinr_db.p10, d.sinr_db.p90, d.se.p10, d.se.p90
        );
    }
    for row in &summary.comparison {
        println!(
            "CDF {:.1}: SE ratio {:.3}  SNR delta {:.2} dB",
            row.percentile, row.se_ratio, row.snr_delta_db
        );
    }
    Ok(summary)
}
