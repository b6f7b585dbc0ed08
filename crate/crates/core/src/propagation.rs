//! Close-in (CI) path loss, thermal noise and distance-based channel gains.
//!
//! There is no shadowing or small-scale fading: the channel power gain is a
//! deterministic function of distance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{db_to_linear, linear_to_db};

pub const SPEED_OF_LIGHT_M_S: f64 = 2.998e8;

/// Thermal noise density used throughout, dBm/Hz.
pub const NOISE_DENSITY_DBM_PER_HZ: f64 = -173.6;

/// Reference distance of the close-in model.
pub const REFERENCE_DISTANCE_M: f64 = 1.0;

pub const DEFAULT_CARRIER_HZ: f64 = 3.5e9;
pub const DEFAULT_EXPONENT: f64 = 3.52;

/// Free-space path loss at 1 m, `20·log10(4π·f·d0/c)`.
pub fn fspl_1m_db(carrier_freq_hz: f64) -> Result<f64> {
    if !(carrier_freq_hz > 0.0 && carrier_freq_hz.is_finite()) {
        return Err(Error::invalid(
            "carrier_freq_hz",
            format!("must be > 0, got {carrier_freq_hz}"),
        ));
    }
    Ok(20.0
        * (4.0 * std::f64::consts::PI * carrier_freq_hz * REFERENCE_DISTANCE_M
            / SPEED_OF_LIGHT_M_S)
            .log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    exponent_n: f64,
    fspl_1m_db: f64,
}

impl PathLossModel {
    pub fn new(exponent_n: f64, fspl_1m_db: f64) -> Result<Self> {
        if !(exponent_n > 0.0 && exponent_n.is_finite()) {
            return Err(Error::invalid(
                "exponent_n",
                format!("must be > 0, got {exponent_n}"),
            ));
        }
        if !fspl_1m_db.is_finite() {
            return Err(Error::invalid("fspl_1m_db", "must be finite"));
        }
        Ok(Self {
            exponent_n,
            fspl_1m_db,
        })
    }

    pub fn from_carrier(carrier_freq_hz: f64, exponent_n: f64) -> Result<Self> {
        Self::new(exponent_n, fspl_1m_db(carrier_freq_hz)?)
    }

    pub fn exponent(&self) -> f64 {
        self.exponent_n
    }

    pub fn fspl_1m_db(&self) -> f64 {
        self.fspl_1m_db
    }

    /// `FSPL(1 m) + 10·n·log10(d/d0)`. Distances under 1 m are outside the
    /// model and rejected.
    pub fn path_loss_db(&self, d_m: f64) -> Result<f64> {
        if d_m.is_nan() || d_m < REFERENCE_DISTANCE_M {
            return Err(Error::BelowReferenceDistance {
                distance_m: d_m,
                reference_m: REFERENCE_DISTANCE_M,
            });
        }
        Ok(self.fspl_1m_db + 10.0 * self.exponent_n * (d_m / REFERENCE_DISTANCE_M).log10())
    }

    /// Linear channel power gain |h|².
    pub fn channel_gain_linear(&self, d_m: f64) -> Result<f64> {
        self.path_loss_db(d_m).map(path_loss_to_gain)
    }
}

impl Default for PathLossModel {
    fn default() -> Self {
        Self::from_carrier(DEFAULT_CARRIER_HZ, DEFAULT_EXPONENT).expect("default carrier is valid")
    }
}

pub fn path_loss_db(model: &PathLossModel, d_m: f64) -> Result<f64> {
    model.path_loss_db(d_m)
}

pub fn channel_gain_linear(model: &PathLossModel, d_m: f64) -> Result<f64> {
    model.channel_gain_linear(d_m)
}

pub fn path_loss_to_gain(path_loss_db: f64) -> f64 {
    db_to_linear(-path_loss_db)
}

pub fn gain_to_path_loss(gain: f64) -> f64 {
    -linear_to_db(gain)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    bw_hz: f64,
    nf_db: f64,
}

impl NoiseConfig {
    pub fn new(bw_hz: f64, nf_db: f64) -> Result<Self> {
        if !(bw_hz > 0.0 && bw_hz.is_finite()) {
            return Err(Error::invalid("bw_hz", format!("must be > 0, got {bw_hz}")));
        }
        if !(nf_db >= 0.0 && nf_db.is_finite()) {
            return Err(Error::invalid(
                "nf_db",
                format!("must be >= 0, got {nf_db}"),
            ));
        }
        Ok(Self { bw_hz, nf_db })
    }

    pub fn bw_hz(&self) -> f64 {
        self.bw_hz
    }

    pub fn nf_db(&self) -> f64 {
        self.nf_db
    }

    pub fn power_dbm(&self) -> f64 {
        noise_power_dbm(self)
    }

    pub fn power_mw(&self) -> f64 {
        db_to_linear(self.power_dbm())
    }
}

impl Default for NoiseConfig {
    /// 100 MHz, 5 dB noise figure.
    fn default() -> Self {
        Self {
            bw_hz: 100e6,
            nf_db: 5.0,
        }
    }
}

/// `−173.6 + 10·log10(BW) + NF`, dBm.
pub fn noise_power_dbm(cfg: &NoiseConfig) -> f64 {
    NOISE_DENSITY_DBM_PER_HZ + 10.0 * cfg.bw_hz.log10() + cfg.nf_db
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model() -> PathLossModel {
        PathLossModel::new(3.52, 40.0).unwrap()
    }

    #[test]
    fn fspl_values() {
        let f0 = SPEED_OF_LIGHT_M_S / (4.0 * std::f64::consts::PI);
        assert!(fspl_1m_db(f0).unwrap().abs() < 1e-12);
        assert!((fspl_1m_db(3.5e9).unwrap() - 43.3).abs() < 0.1);
        assert!((fspl_1m_db(28e9).unwrap() - 61.4).abs() < 0.1);
        assert!(fspl_1m_db(0.0).is_err());
        assert!(fspl_1m_db(-1.0).is_err());
    }

    #[test]
    fn path_loss_values() {
        let m = model();
        assert_eq!(m.path_loss_db(1.0).unwrap(), 40.0);
        assert!((m.path_loss_db(10.0).unwrap() - 75.2).abs() < 1e-12);
        assert!((m.path_loss_db(200.0).unwrap() - 40.0 - 80.99).abs() < 0.01);
        assert!(matches!(
            m.path_loss_db(0.5),
            Err(Error::BelowReferenceDistance { .. })
        ));
        assert!(m.path_loss_db(f64::NAN).is_err());
    }

    #[test]
    fn noise_values() {
        assert!((NoiseConfig::new(100e6, 5.0).unwrap().power_dbm() + 88.6).abs() < 1e-9);
        assert!((NoiseConfig::new(1.0, 0.0).unwrap().power_dbm() + 173.6).abs() < 1e-12);
        assert!((NoiseConfig::new(1.6e9, 5.0).unwrap().power_dbm() + 76.56).abs() < 0.01);
        assert!(NoiseConfig::new(0.0, 5.0).is_err());
        assert!(NoiseConfig::new(1e6, -1.0).is_err());
    }

    #[test]
    fn gain_values() {
        assert_eq!(path_loss_to_gain(0.0), 1.0);
        assert!((path_loss_to_gain(30.0) - 1e-3).abs() < 1e-18);
        let m = model();
        let ratio = m.channel_gain_linear(100.0).unwrap() / m.channel_gain_linear(50.0).unwrap();
        assert!((ratio - 0.0872).abs() < 1e-4);
        assert!((ratio - 2f64.powf(-3.52)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn monotone_in_distance(d in 1.0f64..5_000.0, step in 0.01f64..100.0) {
            let m = model();
            prop_assert!(m.path_loss_db(d + step).unwrap() > m.path_loss_db(d).unwrap());
            prop_assert!(m.channel_gain_linear(d + step).unwrap() < m.channel_gain_linear(d).unwrap());
        }

        #[test]
        fn decade_slope(d in 1.0f64..10_000.0, n in 1.5f64..6.0) {
            let m = PathLossModel::new(n, 43.3).unwrap();
            let slope = m.path_loss_db(10.0 * d).unwrap() - m.path_loss_db(d).unwrap();
            prop_assert!((slope - 10.0 * n).abs() < 1e-9);
        }

        #[test]
        fn gain_round_trip(pl in 0.0f64..250.0) {
            let back = gain_to_path_loss(path_loss_to_gain(pl));
            prop_assert!((back - pl).abs() <= 1e-12 * pl.max(1.0));
        }
    }
}
