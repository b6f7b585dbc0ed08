use spectra_core::bandwidth::{
    ca_curve, field_trial_se, nr_bandwidth_family, peak_cell_rate, sweep_bw, CurvePoint,
    FIELD_TRIAL_MU_MIMO_MBPS, FIELD_TRIAL_SU_MIMO_MBPS,
};
use spectra_core::rue::NR_100MHZ_OCCUPIED_HZ;

use super::{prepare_args, resolve_tx_power};
use crate::output::{Cell, OutputDir};
use crate::{CliError, RunArgs};

fn curve_row(family: &str, p: &CurvePoint) -> Vec<Cell> {
    vec![
        family.into(),
        p.label.clone().into(),
        p.nominal_bw_hz.into(),
        p.layers.into(),
        p.carriers.into(),
        p.occupied_bw_hz.into(),
        p.rate_bps.into(),
        p.se_bps_per_hz.into(),
    ]
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let prepared = prepare_args(args)?;
    let scenario = &prepared.scenario;
    let section = scenario.bandwidth.clone().unwrap_or_default();
    let (tx, calibration) = resolve_tx_power(scenario)?;
    let pathloss = scenario.pathloss()?;

    let bw_hz: Vec<f64> = section.bw_list.iter().map(|mhz| mhz * 1e6).collect();
    let sweep = sweep_bw(
        &section.distances,
        &bw_hz,
        &pathloss,
        tx,
        scenario.propagation.nf_db,
    )?;
    let sweep_rows: Vec<Vec<Cell>> = sweep
        .iter()
        .map(|r| {
            vec![
                r.distance_m.into(),
                r.bw_hz.into(),
                r.rx_power_dbm.into(),
                r.snr_db.into(),
                r.rate_bps.into(),
                r.se_bps_per_hz.into(),
            ]
        })
        .collect();

    let mut curve_rows = Vec::new();
    let family = nr_bandwidth_family();
    for bw in &bw_hz {
        match family.iter().find(|n| (n.nominal_bw_hz - bw).abs() < 1.0) {
            Some(num) => {
                for &layers in &section.layers {
                    curve_rows.push(curve_row("layers", &peak_cell_rate(num, layers)?));
                }
            }
            None => log::warn!(
                "no NR carrier definition for {} MHz, skipped in SE/throughput curves",
                bw / 1e6
            ),
        }
    }
    for p in ca_curve(&family[0], section.ca_layers, &section.carriers)? {
        curve_rows.push(curve_row("carrier_aggregation", &p));
    }
    for (label, mbps) in [
        ("field trial SU-MIMO", FIELD_TRIAL_SU_MIMO_MBPS),
        ("field trial MU-MIMO", FIELD_TRIAL_MU_MIMO_MBPS),
    ] {
        let se = field_trial_se(mbps, NR_100MHZ_OCCUPIED_HZ / 1e6)?;
        curve_rows.push(vec![
            "field_trial".into(),
            label.into(),
            100e6.into(),
            Cell::Text(String::new()),
            1u32.into(),
            NR_100MHZ_OCCUPIED_HZ.into(),
            (mbps * 1e6).into(),
            se.into(),
        ]);
    }

    let mut out = OutputDir::create(&prepared.out)?;
    for &format in &prepared.formats {
        out.write_table(
            "bw_sweep",
            format,
            &[
                "distance_m",
                "bw_hz",
                "rx_power_dbm",
                "snr_db",
                "rate_bps",
                "se_bps_per_hz",
            ],
            &sweep_rows,
        )?;
        out.write_table(
            "se_vs_throughput",
            format,
            &[
                "family",
                "label",
                "nominal_bw_hz",
                "layers",
                "carriers",
                "occupied_bw_hz",
                "rate_bps",
                "se_bps_per_hz",
            ],
            &curve_rows,
        )?;
    }
    let calibration = calibration.map(|c| serde_json::to_value(c).expect("serializable"));
    out.finish("bandwidth", Some(scenario), calibration)?;
    println!(
        "{} sweep rows, {} curve points -> {}",
        sweep_rows.len(),
        curve_rows.len(),
        prepared.out.display()
    );
    Ok(())
}
