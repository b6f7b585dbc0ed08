//! Radio Resource Utilization Efficiency (RUE).
//!
//! RUE is the fraction of the nominal radio resources that actually carry
//! user data: the product of the spectrum, DL slot, data symbol, code rate
//! and cyclic-prefix ratios. Aggregate SE loss against an ideal full-rank
//! link is `1 − RUE · rank_factor`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linklevel::RankDistribution;

/// 273 PRB × 12 subcarriers × 30 kHz.
pub const NR_100MHZ_OCCUPIED_HZ: f64 = 98.28e6;
/// Highest 256-QAM MCS code rate, 948/1024.
pub const MAX_CODE_RATE_256QAM: f64 = 948.0 / 1024.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioResourceConfig {
    pub spectrum_used_hz: f64,
    pub spectrum_total_hz: f64,
    pub dl_slots: u32,
    pub total_slots: u32,
    pub data_symbols: u32,
    pub total_symbols: u32,
    pub code_rate: f64,
    /// Samples per slot that carry data (14 of the 15 symbol-equivalents
    /// once the cyclic prefix is counted).
    pub useful_samples: u32,
    pub total_samples: u32,
}

impl RadioResourceConfig {
    pub fn validate(&self) -> Result<()> {
        fn ratio(name: &'static str, used: f64, total: f64) -> Result<()> {
            if !(total > 0.0 && total.is_finite()) {
                return Err(Error::invalid(
                    name,
                    format!("total must be > 0, got {total}"),
                ));
            }
            if !(used >= 0.0 && used <= total) {
                return Err(Error::invalid(
                    name,
                    format!("{used} not within [0, {total}]"),
                ));
            }
            Ok(())
        }
        ratio("spectrum", self.spectrum_used_hz, self.spectrum_total_hz)?;
        ratio("slots", self.dl_slots as f64, self.total_slots as f64)?;
        ratio(
            "symbols",
            self.data_symbols as f64,
            self.total_symbols as f64,
        )?;
        ratio(
            "samples",
            self.useful_samples as f64,
            self.total_samples as f64,
        )?;
        if !(self.code_rate > 0.0 && self.code_rate <= 1.0) {
            return Err(Error::invalid(
                "code_rate",
                format!("must lie in (0, 1], got {}", self.code_rate),
            ));
        }
        Ok(())
    }

    /// Every ratio equal to one.
    pub fn ideal() -> Self {
        Self {
            spectrum_used_hz: 1.0,
            spectrum_total_hz: 1.0,
            dl_slots: 1,
            total_slots: 1,
            data_symbols: 1,
            total_symbols: 1,
            code_rate: 1.0,
            useful_samples: 1,
            total_samples: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RueFactor {
    pub name: &'static str,
    pub ratio: f64,
}

pub const FACTOR_NAMES: [&str; 5] = ["spectrum", "slots", "symbols", "code_rate", "cp"];

/// Factor ratios in fixed order: spectrum, slots, symbols, code rate, CP.
pub fn rue_breakdown(cfg: &RadioResourceConfig) -> Result<[RueFactor; 5]> {
    cfg.validate()?;
    let ratios = [
        cfg.spectrum_used_hz / cfg.spectrum_total_hz,
        cfg.dl_slots as f64 / cfg.total_slots as f64,
        cfg.data_symbols as f64 / cfg.total_symbols as f64,
        cfg.code_rate,
        cfg.useful_samples as f64 / cfg.total_samples as f64,
    ];
    Ok(std::array::from_fn(|i| RueFactor {
        name: FACTOR_NAMES[i],
        ratio: ratios[i],
    }))
}

pub fn compute_rue(cfg: &RadioResourceConfig) -> Result<f64> {
    Ok(rue_breakdown(cfg)?.iter().map(|f| f.ratio).product())
}

/// A named resource configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuePreset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: RadioResourceConfig,
}

const fn nr_100mhz(dl_slots: u32, data_symbols: u32, useful_samples: u32) -> RadioResourceConfig {
    RadioResourceConfig {
        spectrum_used_hz: NR_100MHZ_OCCUPIED_HZ,
        spectrum_total_hz: 100e6,
        dl_slots,
        total_slots: 40,
        data_symbols,
        total_symbols: 14,
        code_rate: MAX_CODE_RATE_256QAM,
        useful_samples,
        total_samples: 15,
    }
}

pub const PRESETS: [RuePreset; 4] = [
    RuePreset {
        name: "5g-baseline",
        description: "DDDSUDDDD (28/40 DL slots), 11 data symbols, 256-QAM 948/1024, normal CP",
        config: nr_100mhz(28, 11, 14),
    },
    RuePreset {
        name: "dddsu-3pilot",
        description: "DDDSU (24/40 DL slots), 3 pilot symbols (9 data symbols)",
        config: nr_100mhz(24, 9, 14),
    },
    RuePreset {
        name: "ps-less",
        description: "baseline with a pilot-symbol-less link (12 data symbols)",
        config: nr_100mhz(28, 12, 14),
    },
    RuePreset {
        name: "ps-cp-less-fd",
        description: "pilot-less, CP-less, full duplex (all slots DL)",
        config: nr_100mhz(40, 12, 15),
    },
];

pub fn preset(name: &str) -> Result<&'static RuePreset> {
    PRESETS
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// Expected layer count normalized by the layer capability: `Σ P(r)·r / M`.
pub fn rank_factor(dist: &RankDistribution, max_layers: u32) -> Result<f64> {
    if max_layers == 0 {
        return Err(Error::invalid("max_layers", "must be >= 1"));
    }
    if let Some((r, _)) = dist.iter().find(|&(r, p)| r > max_layers && p > 0.0) {
        return Err(Error::invalid(
            "rank_distribution",
            format!("rank {r} exceeds {max_layers} layers"),
        ));
    }
    Ok(dist.expected_layers() / max_layers as f64)
}

/// `1 − rue · rank_factor`.
pub fn aggregate_se_loss(rue: f64, rank_factor: f64) -> Result<f64> {
    for (name, v) in [("rue", rue), ("rank_factor", rank_factor)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::invalid(name, format!("must lie in (0, 1], got {v}")));
        }
    }
    Ok(1.0 - rue * rank_factor)
}

/// Target RUE as a multiple of a baseline, capped at 1.
pub fn rue_goal(baseline: f64, multiplier: f64) -> f64 {
    let goal = baseline * multiplier;
    if goal > 1.0 {
        log::warn!("RUE goal {baseline} x {multiplier} = {goal} exceeds 1, clamping");
        1.0
    } else {
        goal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rue_of(name: &str) -> f64 {
        compute_rue(&preset(name).unwrap().config).unwrap()
    }

    #[test]
    fn preset_values() {
        assert!((rue_of("5g-baseline") - 0.467).abs() < 0.003);
        assert!((rue_of("dddsu-3pilot") - 0.328).abs() < 0.003);
        assert!((rue_of("ps-cp-less-fd") - 0.780).abs() < 0.003);
        assert_eq!(compute_rue(&RadioResourceConfig::ideal()).unwrap(), 1.0);
        assert!(matches!(preset("nope"), Err(Error::UnknownPreset(_))));
        assert!(preset("5G-Baseline").is_ok());
    }

    #[test]
    fn baseline_breakdown() {
        let b = rue_breakdown(&preset("5g-baseline").unwrap().config).unwrap();
        let expected = [0.9828, 0.70, 0.7857, 0.92578, 0.9333];
        for (f, e) in b.iter().zip(expected) {
            assert!((f.ratio - e).abs() < 1e-4, "{}: {} vs {e}", f.name, f.ratio);
        }
        let names: Vec<_> = b.iter().map(|f| f.name).collect();
        assert_eq!(names, FACTOR_NAMES);
        assert!(rue_breakdown(&RadioResourceConfig::ideal())
            .unwrap()
            .iter()
            .all(|f| f.ratio == 1.0));
    }

    #[test]
    fn invalid_configs() {
        let base = preset("5g-baseline").unwrap().config;
        let bad = [
            RadioResourceConfig {
                dl_slots: 41,
                ..base
            },
            RadioResourceConfig {
                total_symbols: 0,
                data_symbols: 0,
                ..base
            },
            RadioResourceConfig {
                code_rate: 0.0,
                ..base
            },
            RadioResourceConfig {
                code_rate: 1.2,
                ..base
            },
            RadioResourceConfig {
                spectrum_used_hz: 101e6,
                ..base
            },
            RadioResourceConfig {
                useful_samples: 16,
                ..base
            },
        ];
        for cfg in bad {
            assert!(compute_rue(&cfg).is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn rank_factors() {
        let f = |d: RankDistribution, m| rank_factor(&d, m).unwrap();
        assert!((f(RankDistribution::sixty_forty(), 4) - 0.70).abs() < 1e-12);
        assert!((f(RankDistribution::new([(2, 0.2), (4, 0.8)]).unwrap(), 4) - 0.90).abs() < 1e-12);
        assert_eq!(f(RankDistribution::fixed(4).unwrap(), 4), 1.0);
        assert!(rank_factor(&RankDistribution::fixed(4).unwrap(), 2).is_err());
    }

    #[test]
    fn aggregate_losses() {
        let l = |r, k| aggregate_se_loss(r, k).unwrap();
        assert!((l(0.50, 0.70) - 0.65).abs() < 1e-12);
        assert!((l(0.78, 0.70) - 0.454).abs() < 1e-12);
        assert!((l(0.78, 1.0) - 0.22).abs() < 1e-12);
        assert_eq!(l(1.0, 1.0), 0.0);
        assert!(aggregate_se_loss(0.0, 0.5).is_err());
        assert!(aggregate_se_loss(0.5, 1.5).is_err());
    }

    #[test]
    fn goals() {
        assert_eq!(rue_goal(0.50, 1.5), 0.75);
        assert_eq!(rue_goal(0.42, 1.0), 0.42);
        assert!((rue_goal(0.467, 1.5) - 0.7005).abs() < 1e-12);
        assert_eq!(rue_goal(0.8, 1.5), 1.0);
    }

    fn config_strategy() -> impl Strategy<Value = RadioResourceConfig> {
        (
            (1.0f64..1e9, 0.0f64..=1.0),
            (1u32..100, 0.0f64..=1.0),
            (1u32..30, 0.0f64..=1.0),
            0.01f64..=1.0,
            (1u32..30, 0.0f64..=1.0),
        )
            .prop_map(|((st, sf), (tt, tf), (yt, yf), code, (at, af))| {
                RadioResourceConfig {
                    spectrum_used_hz: st * sf,
                    spectrum_total_hz: st,
                    dl_slots: (tt as f64 * tf).floor() as u32,
                    total_slots: tt,
                    data_symbols: (yt as f64 * yf).floor() as u32,
                    total_symbols: yt,
                    code_rate: code,
                    useful_samples: (at as f64 * af).floor() as u32,
                    total_samples: at,
                }
            })
    }

    proptest! {
        #[test]
        fn breakdown_product_is_total(cfg in config_strategy()) {
            let total = compute_rue(&cfg).unwrap();
            let product: f64 = rue_breakdown(&cfg).unwrap().iter().map(|f| f.ratio).product();
            prop_assert!((product - total).abs() <= 1e-12 * total.max(f64::MIN_POSITIVE));
            prop_assert!((0.0..=1.0).contains(&total));
        }

        #[test]
        fn monotone_in_numerators(cfg in config_strategy()) {
            let base = compute_rue(&cfg).unwrap();
            if cfg.dl_slots < cfg.total_slots {
                let more = RadioResourceConfig { dl_slots: cfg.dl_slots + 1, ..cfg };
                prop_assert!(compute_rue(&more).unwrap() >= base);
            }
            let wider = RadioResourceConfig { total_symbols: cfg.total_symbols + 1, ..cfg };
            prop_assert!(compute_rue(&wider).unwrap() <= base);
        }

        #[test]
        fn loss_complements_product(rue in 0.001f64..=1.0, rank in 0.001f64..=1.0) {
            // exact up to the rounding of the subtraction from 1
            let back = 1.0 - aggregate_se_loss(rue, rank).unwrap();
            prop_assert!((back - rue * rank).abs() <= f64::EPSILON);
        }
    }
}
