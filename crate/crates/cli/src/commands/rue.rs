use std::path::PathBuf;

use serde::Serialize;
use spectra_core::rue::{compute_rue, preset, rue_breakdown, RadioResourceConfig, RueFactor};

use crate::output::{Cell, OutputDir};
use crate::scenario::{Format, ScenarioFile};
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct RueReport {
    pub source: String,
    pub config: RadioResourceConfig,
    pub factors: [RueFactor; 5],
    pub rue: f64,
    pub loss: f64,
}

pub fn report(source: String, config: RadioResourceConfig) -> Result<RueReport, CliError> {
    let factors =
        rue_breakdown(&config).map_err(|e| CliError::Config(format!("rue config: {e}")))?;
    let rue = compute_rue(&config).map_err(|e| CliError::Config(format!("rue config: {e}")))?;
    Ok(RueReport {
        source,
        config,
        factors,
        rue,
        loss: 1.0 - rue,
    })
}

fn select(
    preset_name: Option<String>,
    inline: Option<String>,
    scenario: Option<PathBuf>,
) -> Result<RueReport, CliError> {
    if let Some(text) = inline {
        let cfg: RadioResourceConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("--inline: {e}")))?;
        return report("inline".into(), cfg);
    }
    let name = match (preset_name, scenario) {
        (Some(name), _) => name,
        (None, Some(path)) => {
            let s = ScenarioFile::load(&path)?;
            s.pipeline
                .map(|p| p.rue_preset)
                .ok_or_else(|| CliError::Config("pipeline.rue_preset: missing".into()))?
        }
        (None, None) => "5g-baseline".into(),
    };
    let p = preset(&name).map_err(|e| CliError::Config(format!("--preset: {e}")))?;
    report(p.name.to_string(), p.config)
}

pub fn render_text(r: &RueReport) -> String {
    let mut s = format!("RUE breakdown ({})\n", r.source);
    for f in &r.factors {
        s.push_str(&format!("  {:<10} {:>8.4}\n", f.name, f.ratio));
    }
    s.push_str(&format!(
        "  {:<10} {:>8.4}  (loss {:.4})\n",
        "total", r.rue, r.loss
    ));
    s
}

pub fn run(
    preset_name: Option<String>,
    inline: Option<String>,
    scenario: Option<PathBuf>,
    out: Option<PathBuf>,
    format: Option<Format>,
) -> Result<(), CliError> {
    let r = select(preset_name, inline, scenario)?;
    match format.unwrap_or(Format::Csv) {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&r).map_err(|e| CliError::Runtime(e.to_string()))?
        ),
        Format::Csv => print!("{}", render_text(&r)),
    }
    if let Some(dir) = out {
        let mut out = OutputDir::create(dir)?;
        let mut rows: Vec<Vec<Cell>> = r
            .factors
            .iter()
            .map(|f| vec![f.name.into(), f.ratio.into()])
            .collect();
        rows.push(vec!["total".into(), r.rue.into()]);
        out.write_table(
            "rue_breakdown",
            format.unwrap_or(Format::Csv),
            &["factor", "ratio"],
            &rows,
        )?;
        out.write_json("rue.json", &r)?;
        out.finish("rue", None, None)?;
    }
    Ok(())
}
