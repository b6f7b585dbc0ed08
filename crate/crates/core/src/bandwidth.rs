//! Throughput against transmission bandwidth, and SE against peak cell
//! throughput for layer counts and carrier aggregation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagation::{PathLossModel, NOISE_DENSITY_DBM_PER_HZ};
use crate::rue::MAX_CODE_RATE_256QAM;
use crate::{db_to_linear, linear_to_db};

pub const DEFAULT_BW_LIST_HZ: [f64; 5] = [100e6, 200e6, 400e6, 800e6, 1600e6];
pub const DEFAULT_DISTANCES_M: [f64; 3] = [30.0, 60.0, 200.0];
pub const DEFAULT_LAYERS: [u32; 5] = [1, 2, 4, 8, 16];
pub const DEFAULT_CARRIERS: [u32; 4] = [1, 2, 4, 8];

/// Commercial 5G measurements on a 98.28 MHz carrier.
pub const FIELD_TRIAL_SU_MIMO_MBPS: f64 = 911.0;
pub const FIELD_TRIAL_MU_MIMO_MBPS: f64 = 2909.0;

/// `R = BW·log2(1 + S_r / (N0·BW))`, bps.
pub fn shannon_rate(s_r_dbm: f64, bw_hz: f64, n0_dbm_per_hz: f64) -> Result<f64> {
    if !(bw_hz > 0.0 && bw_hz.is_finite()) {
        return Err(Error::invalid("bw_hz", format!("must be > 0, got {bw_hz}")));
    }
    let snr = db_to_linear(s_r_dbm) / (db_to_linear(n0_dbm_per_hz) * bw_hz);
    Ok(bw_hz * (1.0 + snr).log2())
}

/// Infinite-bandwidth limit of [`shannon_rate`], `S_r / (N0·ln 2)`.
pub fn shannon_asymptote(s_r_dbm: f64, n0_dbm_per_hz: f64) -> f64 {
    db_to_linear(s_r_dbm) / (db_to_linear(n0_dbm_per_hz) * std::f64::consts::LN_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BwSweepRow {
    pub distance_m: f64,
    pub bw_hz: f64,
    pub rx_power_dbm: f64,
    pub snr_db: f64,
    pub rate_bps: f64,
    pub se_bps_per_hz: f64,
}

/// Cross product of distances and bandwidths at constant received power per
/// distance (the noise grows with bandwidth, the signal does not).
pub fn sweep_bw(
    distances_m: &[f64],
    bw_list_hz: &[f64],
    pathloss: &PathLossModel,
    tx_power_dbm: f64,
    nf_db: f64,
) -> Result<Vec<BwSweepRow>> {
    let n0 = NOISE_DENSITY_DBM_PER_HZ + nf_db;
    let mut rows = Vec::with_capacity(distances_m.len() * bw_list_hz.len());
    for &d in distances_m {
        let s_r = tx_power_dbm - pathloss.path_loss_db(d)?;
        for &bw in bw_list_hz {
            let rate = shannon_rate(s_r, bw, n0)?;
            rows.push(BwSweepRow {
                distance_m: d,
                bw_hz: bw,
                rx_power_dbm: s_r,
                snr_db: s_r - (n0 + 10.0 * bw.log10()),
                rate_bps: rate,
                se_bps_per_hz: rate / bw,
            });
        }
    }
    Ok(rows)
}

/// 5G NR carrier parameters for peak-rate accounting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumerologyConfig {
    pub nominal_bw_hz: f64,
    pub prb_count: u32,
    pub scs_hz: f64,
    pub data_symbols_per_slot: u32,
    pub slots_per_frame: u32,
    pub dl_slots_used: u32,
    pub modulation_bits: u32,
    pub code_rate: f64,
}

impl NumerologyConfig {
    /// 100 MHz at 30 kHz: 273 PRB, 11 data symbols, 256-QAM at 948/1024,
    /// 27 of 40 slots carrying user data.
    pub const fn nr_100mhz() -> Self {
        Self {
            nominal_bw_hz: 100e6,
            prb_count: 273,
            scs_hz: 30e3,
            data_symbols_per_slot: 11,
            slots_per_frame: 40,
            dl_slots_used: 27,
            modulation_bits: 8,
            code_rate: MAX_CODE_RATE_256QAM,
        }
    }

    /// Same slot pattern and MCS with a different carrier size.
    pub const fn with_carrier(nominal_bw_hz: f64, scs_hz: f64, prb_count: u32) -> Self {
        Self {
            nominal_bw_hz,
            prb_count,
            scs_hz,
            ..Self::nr_100mhz()
        }
    }

    pub fn occupied_bw_hz(&self) -> f64 {
        self.prb_count as f64 * 12.0 * self.scs_hz
    }

    /// Duration of one 14-symbol slot (cyclic prefix included).
    pub fn slot_duration_s(&self) -> f64 {
        1e-3 * 15e3 / self.scs_hz
    }

    pub fn duty(&self) -> f64 {
        self.dl_slots_used as f64 / self.slots_per_frame as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scs_hz > 0.0 && self.nominal_bw_hz > 0.0) {
            return Err(Error::invalid(
                "numerology",
                "bandwidth and SCS must be > 0",
            ));
        }
        if self.occupied_bw_hz() > self.nominal_bw_hz {
            return Err(Error::invalid(
                "prb_count",
                format!(
                    "occupied {} Hz exceeds nominal {} Hz",
                    self.occupied_bw_hz(),
                    self.nominal_bw_hz
                ),
            ));
        }
        if self.slots_per_frame == 0 || self.dl_slots_used > self.slots_per_frame {
            return Err(Error::invalid(
                "dl_slots_used",
                format!("{} of {} slots", self.dl_slots_used, self.slots_per_frame),
            ));
        }
        if self.data_symbols_per_slot > 14 {
            return Err(Error::invalid("data_symbols_per_slot", "at most 14"));
        }
        if !(self.code_rate > 0.0 && self.code_rate <= 1.0) {
            return Err(Error::invalid("code_rate", "must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Maximum-PRB carriers for the default bandwidth grid: 100 MHz FR1 at
/// 30 kHz, 200/400 MHz at 120 kHz, 800/1600 MHz at 480 kHz.
pub fn nr_bandwidth_family() -> Vec<NumerologyConfig> {
    vec![
        NumerologyConfig::nr_100mhz(),
        NumerologyConfig::with_carrier(200e6, 120e3, 132),
        NumerologyConfig::with_carrier(400e6, 120e3, 264),
        NumerologyConfig::with_carrier(800e6, 480e3, 124),
        NumerologyConfig::with_carrier(1600e6, 480e3, 248),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub label: String,
    pub nominal_bw_hz: f64,
    pub layers: u32,
    pub carriers: u32,
    /// Total occupied bandwidth across carriers.
    pub occupied_bw_hz: f64,
    pub rate_bps: f64,
    pub se_bps_per_hz: f64,
}

/// Peak rate: `layers · Qm · R · (PRB·12·data symbols / slot) · duty`,
/// SE against the occupied bandwidth.
pub fn peak_cell_rate(num: &NumerologyConfig, layers: u32) -> Result<CurvePoint> {
    num.validate()?;
    if layers == 0 {
        return Err(Error::invalid("layers", "must be >= 1"));
    }
    let re_per_second =
        num.prb_count as f64 * 12.0 * num.data_symbols_per_slot as f64 / num.slot_duration_s();
    let rate =
        layers as f64 * num.modulation_bits as f64 * num.code_rate * re_per_second * num.duty();
    let occupied = num.occupied_bw_hz();
    Ok(CurvePoint {
        label: format!("{}L", layers),
        nominal_bw_hz: num.nominal_bw_hz,
        layers,
        carriers: 1,
        occupied_bw_hz: occupied,
        rate_bps: rate,
        se_bps_per_hz: rate / occupied,
    })
}

/// Carrier aggregation: `n` identical carriers of `per_carrier_layers` each.
pub fn ca_curve(
    num: &NumerologyConfig,
    per_carrier_layers: u32,
    carrier_counts: &[u32],
) -> Result<Vec<CurvePoint>> {
    let single = peak_cell_rate(num, per_carrier_layers)?;
    carrier_counts
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::invalid("carrier_counts", "must be >= 1"));
            }
            let occupied = single.occupied_bw_hz * n as f64;
            let rate = single.rate_bps * n as f64;
            Ok(CurvePoint {
                label: format!("{}xCA {}L", n, per_carrier_layers),
                nominal_bw_hz: num.nominal_bw_hz,
                layers: per_carrier_layers,
                carriers: n,
                occupied_bw_hz: occupied,
                rate_bps: rate,
                se_bps_per_hz: rate / occupied,
            })
        })
        .collect()
}

/// Measured rate over occupied bandwidth, bps/Hz.
pub fn field_trial_se(rate_mbps: f64, occupied_bw_mhz: f64) -> Result<f64> {
    if !(rate_mbps > 0.0 && occupied_bw_mhz > 0.0) {
        return Err(Error::invalid(
            "field_trial",
            "rate and bandwidth must be > 0",
        ));
    }
    Ok(rate_mbps / occupied_bw_mhz)
}

/// SNR at the receiver for a given received power, bandwidth and NF.
pub fn snr_db(s_r_dbm: f64, bw_hz: f64, nf_db: f64) -> f64 {
    s_r_dbm - (NOISE_DENSITY_DBM_PER_HZ + nf_db + linear_to_db(bw_hz))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_unit_snr() {
        let bw = 50e6;
        let n0 = -170.0;
        let s_r = n0 + linear_to_db(bw);
        assert!((shannon_rate(s_r, bw, n0).unwrap() - bw).abs() < 1e-3);
    }

    #[test]
    fn rate_reference_value() {
        let r = shannon_rate(-60.0, 100e6, -173.6).unwrap();
        assert!((r - 1.116e9).abs() < 1e6);
        assert!(shannon_rate(-60.0, 0.0, -173.6).is_err());
    }

    #[test]
    fn rate_below_asymptote() {
        for bw in [1e3, 1e6, 1e8, 1e10, 1e12] {
            assert!(shannon_rate(-80.0, bw, -168.6).unwrap() < shannon_asymptote(-80.0, -168.6));
        }
    }

    #[test]
    fn sweep_single_bw() {
        let pl = PathLossModel::default();
        let rows = sweep_bw(&[30.0, 60.0], &[100e6], &pl, 40.0, 5.0).unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            let s_r = 40.0 - pl.path_loss_db(row.distance_m).unwrap();
            assert_eq!(row.rate_bps, shannon_rate(s_r, 100e6, -168.6).unwrap());
            assert!((row.snr_db - snr_db(s_r, 100e6, 5.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn peak_rate_reference() {
        let p = peak_cell_rate(&NumerologyConfig::nr_100mhz(), 1).unwrap();
        assert!((p.rate_bps / 1e6 - 360.3).abs() < 0.1);
        assert!((p.se_bps_per_hz - 3.67).abs() < 0.01);
        assert!((p.occupied_bw_hz - 98.28e6).abs() < 1.0);
        let p4 = peak_cell_rate(&NumerologyConfig::nr_100mhz(), 4).unwrap();
        assert_eq!(p4.rate_bps, 4.0 * p.rate_bps);
        let idle = NumerologyConfig {
            dl_slots_used: 0,
            ..NumerologyConfig::nr_100mhz()
        };
        assert_eq!(peak_cell_rate(&idle, 2).unwrap().rate_bps, 0.0);
        assert!(peak_cell_rate(&NumerologyConfig::nr_100mhz(), 0).is_err());
    }

    #[test]
    fn numerology_validation() {
        let wide = NumerologyConfig {
            prb_count: 300,
            ..NumerologyConfig::nr_100mhz()
        };
        assert!(wide.validate().is_err());
        let over = NumerologyConfig {
            dl_slots_used: 41,
            ..NumerologyConfig::nr_100mhz()
        };
        assert!(over.validate().is_err());
        for num in nr_bandwidth_family() {
            num.validate().unwrap();
        }
    }

    #[test]
    fn carrier_aggregation() {
        let num = NumerologyConfig::nr_100mhz();
        let ca = ca_curve(&num, 2, &[1, 2, 8]).unwrap();
        let two = peak_cell_rate(&num, 2).unwrap();
        let four = peak_cell_rate(&num, 4).unwrap();
        assert_eq!(ca[0].rate_bps, two.rate_bps);
        assert_eq!(ca[0].se_bps_per_hz, two.se_bps_per_hz);
        assert!((ca[1].rate_bps - four.rate_bps).abs() <= 1e-6);
        assert!((ca[1].se_bps_per_hz - four.se_bps_per_hz / 2.0).abs() < 1e-12);
        assert!((ca[2].rate_bps - 8.0 * two.rate_bps).abs() <= 1e-6);
        assert!((ca[2].se_bps_per_hz - two.se_bps_per_hz).abs() < 1e-12);
        assert!(ca_curve(&num, 2, &[0]).is_err());
    }

    #[test]
    fn field_trials() {
        assert!((field_trial_se(911.0, 98.28).unwrap() - 9.27).abs() < 0.01);
        assert!((field_trial_se(2909.0, 98.28).unwrap() - 29.6).abs() < 0.01);
        assert_eq!(field_trial_se(98.28, 98.28).unwrap(), 1.0);
        assert!(field_trial_se(0.0, 98.28).is_err());
    }
}
