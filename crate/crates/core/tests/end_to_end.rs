use spectra_core::bandwidth::{peak_cell_rate, NumerologyConfig};
use spectra_core::geometry::{build_grid_layout, Point2D};
use spectra_core::linklevel::RankDistribution;
use spectra_core::montecarlo::{
    run_deployment, Deployment, SePipeline, SimulationConfig, UserPlacement,
};
use spectra_core::propagation::{NoiseConfig, PathLossModel};
use spectra_core::rue::{compute_rue, preset};
use spectra_core::{db_to_linear, linear_to_db};

fn pinned(deployment: Deployment, at: Point2D, tx_dbm: f64) -> SimulationConfig {
    let layout = build_grid_layout(3, 3, 200.0).unwrap();
    let mut cfg = SimulationConfig::center_cell(
        layout,
        PathLossModel::default(),
        tx_dbm,
        NoiseConfig::default(),
        deployment,
        5.0,
        1,
        0,
    )
    .unwrap();
    cfg.placement = UserPlacement::Pinned(at);
    cfg
}

#[test]
fn interference_limited_sir_at_fifty_meters() {
    // hand-summed d^-3.52 over the eight interferers
    let serving = 50f64.powf(-3.52);
    let interference: f64 = [
        (150.0, 1.0),
        (206.155_281_280_883, 2.0),
        (250.0, 3.0),
        (320.156_211_871_642_2, 2.0),
    ]
    .iter()
    .map(|(d, k)| k * f64::powf(*d, -3.52))
    .sum();
    let expected = linear_to_db(serving / interference);
    let r = run_deployment(&pinned(
        Deployment::TypicalCellular,
        Point2D::new(50.0, 0.0),
        90.0,
    ))
    .unwrap();
    let got = r.sinr_db.samples()[0];
    assert!((got - expected).abs() < 1e-3, "{got} vs {expected}");
    assert!((got - 13.2).abs() < 0.1);
}

#[test]
fn cell_free_snr_closed_form() {
    let pl = PathLossModel::default();
    let at = Point2D::new(30.0, 40.0);
    let layout = build_grid_layout(3, 3, 200.0).unwrap();
    let gain_sum: f64 = layout
        .positions()
        .iter()
        .map(|p| pl.channel_gain_linear(at.distance_to(p)).unwrap())
        .sum();
    let noise = NoiseConfig::default();
    let expected = linear_to_db(db_to_linear(30.0) / 9.0 * gain_sum / noise.power_mw());
    let r = run_deployment(&pinned(Deployment::CellFree, at, 30.0)).unwrap();
    assert!((r.sinr_db.samples()[0] - expected).abs() < 1e-9);
}

#[test]
fn pipeline_composes_rue_rank_and_loss() {
    let rue = compute_rue(&preset("5g-baseline").unwrap().config).unwrap();
    let mut cfg = pinned(Deployment::CellFree, Point2D::new(30.0, 40.0), 30.0);
    cfg.se_pipeline = Some(SePipeline {
        rank: RankDistribution::sixty_forty(),
        il_db: 3.0,
        rue,
    });
    let r = run_deployment(&cfg).unwrap();
    let snr_db = r.sinr_db.samples()[0];
    let expected = rue * 2.8 * (1.0 + db_to_linear(snr_db - 3.0)).log2();
    assert!((r.se.samples()[0] - expected).abs() < 1e-12);
}

#[test]
fn single_layer_peak_rate() {
    let p = peak_cell_rate(&NumerologyConfig::nr_100mhz(), 1).unwrap();
    // 273·12·11 REs per 0.5 ms, 8 bits at 948/1024, 27 of 40 slots
    let expected = 273.0 * 12.0 * 11.0 / 0.5e-3 * 8.0 * (948.0 / 1024.0) * (27.0 / 40.0);
    assert!((p.rate_bps - expected).abs() < 1e-3);
    assert!((p.rate_bps / 1e6 - 360.3).abs() < 0.1);
    assert!((p.se_bps_per_hz - 3.666).abs() < 1e-3);
}
