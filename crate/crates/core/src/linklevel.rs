//! Per-user SINR/SNR for both deployments and the spectral-efficiency
//! formulas built on top of them.
//!
//! The matched receive weight (cellular) and matched precoder (cell-free)
//! only rotate phases, so with magnitude-only channels they contribute unit
//! gain and are folded directly into the closed forms below.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::db_to_linear;
use crate::error::{Error, Result};

/// Desired cell plus co-channel interferers, all at the same transmit power.
#[derive(Debug, Clone, PartialEq)]
pub struct CellularLink {
    pub serving_gain: f64,
    pub interferer_gains: Vec<f64>,
    pub tx_power_mw: f64,
    pub noise_mw: f64,
}

/// Every O-RU transmits to the user with `total_power_mw / L`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellFreeLink {
    pub gains: Vec<f64>,
    pub total_power_mw: f64,
    pub noise_mw: f64,
}

pub fn cellular_sinr(link: &CellularLink) -> f64 {
    cellular_sinr_parts(
        link.serving_gain,
        link.interferer_gains.iter().sum(),
        link.tx_power_mw,
        link.noise_mw,
    )
}

/// SINR from a pre-summed interferer gain.
#[inline]
pub fn cellular_sinr_parts(
    serving_gain: f64,
    interference_gain: f64,
    tx_mw: f64,
    noise_mw: f64,
) -> f64 {
    tx_mw * serving_gain / (tx_mw * interference_gain + noise_mw)
}

pub fn cellfree_snr(link: &CellFreeLink) -> f64 {
    cellfree_snr_parts(
        link.gains.iter().sum(),
        link.gains.len(),
        link.total_power_mw,
        link.noise_mw,
    )
}

#[inline]
pub fn cellfree_snr_parts(gain_sum: f64, cells: usize, total_mw: f64, noise_mw: f64) -> f64 {
    gain_sum * (total_mw / cells as f64) / noise_mw
}

/// Shannon SE of a single stream, `log2(1 + sinr)`.
#[inline]
pub fn se_siso(sinr: f64) -> f64 {
    (1.0 + sinr).log2()
}

/// Full-rank upper bound, `M·log2(1 + sinr)`.
pub fn se_mimo_upper(sinr: f64, m_layers: u32) -> f64 {
    m_layers as f64 * se_siso(sinr)
}

/// `Σ log2(1 + (sinr/M)·λᵢ²)` over the squared singular values of H.
pub fn se_mimo_eigen(eigenvalue_squares: &[f64], sinr: f64, m_layers: u32) -> Result<f64> {
    if m_layers == 0 {
        return Err(Error::invalid("m_layers", "must be >= 1"));
    }
    if eigenvalue_squares.len() > m_layers as usize {
        return Err(Error::invalid(
            "eigenvalue_squares",
            format!("{} values for {m_layers} layers", eigenvalue_squares.len()),
        ));
    }
    if let Some(bad) = eigenvalue_squares.iter().find(|&&l| l.is_nan() || l < 0.0) {
        return Err(Error::invalid(
            "eigenvalue_squares",
            format!("must be >= 0, got {bad}"),
        ));
    }
    let per_layer = sinr / m_layers as f64;
    Ok(eigenvalue_squares
        .iter()
        .map(|l2| (1.0 + per_layer * l2).log2())
        .sum())
}

/// Probability mass over the number of spatial layers the channel supports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<u32, f64>", into = "BTreeMap<u32, f64>")]
pub struct RankDistribution {
    probs: BTreeMap<u32, f64>,
}

impl RankDistribution {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(entries: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for (rank, p) in entries {
            if rank == 0 {
                return Err(Error::invalid("rank_distribution", "ranks start at 1"));
            }
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::invalid(
                    "rank_distribution",
                    format!("probability for rank {rank} must be >= 0, got {p}"),
                ));
            }
            *probs.entry(rank).or_insert(0.0) += p;
        }
        let total: f64 = probs.values().sum();
        if (total - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::invalid(
                "rank_distribution",
                format!("probabilities sum to {total}, expected 1"),
            ));
        }
        Ok(Self { probs })
    }

    /// Always rank `r`.
    pub fn fixed(rank: u32) -> Result<Self> {
        Self::new([(rank, 1.0)])
    }

    /// Rank 2 with 60 %, rank 4 with 40 %.
    pub fn sixty_forty() -> Self {
        Self::new([(2, 0.6), (4, 0.4)]).expect("valid")
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.probs.iter().map(|(&r, &p)| (r, p))
    }

    pub fn max_rank(&self) -> u32 {
        self.probs
            .iter()
            .rev()
            .find(|(_, &p)| p > 0.0)
            .map(|(&r, _)| r)
            .unwrap_or(1)
    }

    /// `Σ P(r)·r`.
    pub fn expected_layers(&self) -> f64 {
        self.iter().map(|(r, p)| p * r as f64).sum()
    }
}

impl TryFrom<BTreeMap<u32, f64>> for RankDistribution {
    type Error = Error;

    fn try_from(map: BTreeMap<u32, f64>) -> Result<Self> {
        Self::new(map)
    }
}

impl From<RankDistribution> for BTreeMap<u32, f64> {
    fn from(d: RankDistribution) -> Self {
        d.probs
    }
}

/// `Σ P(r)·r·log2(1 + sinr)`.
pub fn rank_weighted_se(dist: &RankDistribution, sinr: f64) -> f64 {
    dist.iter().map(|(r, p)| p * se_mimo_upper(sinr, r)).sum()
}

/// Implementation loss is a flat dB offset on the SINR.
pub fn apply_il(sinr_db: f64, il_db: f64) -> f64 {
    sinr_db - il_db
}

/// Relative SE gain from lowering the implementation loss from `il_ref_db`
/// to `il_new_db` at a given SINR.
pub fn il_se_gain(sinr_db: f64, il_ref_db: f64, il_new_db: f64) -> Result<f64> {
    if il_new_db > il_ref_db {
        return Err(Error::invalid(
            "il_new_db",
            format!("{il_new_db} dB exceeds the reference {il_ref_db} dB"),
        ));
    }
    let reference = se_siso(db_to_linear(apply_il(sinr_db, il_ref_db)));
    let improved = se_siso(db_to_linear(apply_il(sinr_db, il_new_db)));
    Ok(improved / reference - 1.0)
}

/// `RUE · layers · log2(1 + lin(sinr − IL))`, with `layers` the expected
/// layer count (2.8 for the 60/40 distribution).
pub fn real_world_se(rue: f64, rank_factor_layers: f64, sinr_db: f64, il_db: f64) -> f64 {
    rue * rank_factor_layers * se_siso(db_to_linear(apply_il(sinr_db, il_db)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid_layout, distance, Point2D};
    use crate::linear_to_db;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn sinr_without_interferers_is_snr() {
        let link = CellularLink {
            serving_gain: 1e-9,
            interferer_gains: vec![],
            tx_power_mw: 1e4,
            noise_mw: 1e-8,
        };
        assert!(close(cellular_sinr(&link), 1e-5 / 1e-8, 1e-9));
    }

    #[test]
    fn symmetric_interference_is_zero_db() {
        let link = CellularLink {
            serving_gain: 2e-10,
            interferer_gains: vec![2e-10],
            tx_power_mw: 1.0,
            noise_mw: 1e-30,
        };
        assert!(close(cellular_sinr(&link), 1.0, 1e-12));
    }

    #[test]
    fn interference_limited_sir_at_fifty_meters() {
        let layout = build_grid_layout(3, 3, 200.0).unwrap();
        let user = Point2D::new(50.0, 0.0);
        let g = |p: &Point2D| distance(&user, p).powf(-3.52);
        let serving = g(&layout.center());
        let interferers: Vec<f64> = layout
            .positions()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != layout.center_index())
            .map(|(_, p)| g(p))
            .collect();
        let link = CellularLink {
            serving_gain: serving,
            interferer_gains: interferers,
            tx_power_mw: 1.0,
            noise_mw: 1e-300,
        };
        let sir_db = linear_to_db(cellular_sinr(&link));
        // Hand evaluation over {150, 206.16x2, 250x3, 320.16x2} m gives 13.199 dB.
        assert!(close(sir_db, 13.2, 0.1));
        assert!(close(sir_db, 13.199155861005266, 1e-9));
    }

    #[test]
    fn cellfree_single_cell_is_siso() {
        let link = CellFreeLink {
            gains: vec![3e-11],
            total_power_mw: 5e3,
            noise_mw: 1e-9,
        };
        assert!(close(cellfree_snr(&link), 3e-11 * 5e3 / 1e-9, 1e-12));
    }

    #[test]
    fn cellfree_equal_gains_match_one_full_power_cell() {
        let g = 4e-12;
        let cf = CellFreeLink {
            gains: vec![g; 9],
            total_power_mw: 8e3,
            noise_mw: 1.4e-9,
        };
        let cell = CellularLink {
            serving_gain: g,
            interferer_gains: vec![],
            tx_power_mw: 8e3,
            noise_mw: 1.4e-9,
        };
        let (a, b) = (cellfree_snr(&cf), cellular_sinr(&cell));
        assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn cellfree_term_by_term() {
        let layout = build_grid_layout(3, 3, 200.0).unwrap();
        let user = Point2D::new(50.0, 0.0);
        let fspl = 43.33;
        let (pt, noise) = (10f64.powf(3.9), 10f64.powf(-8.86));
        let gains: Vec<f64> = layout
            .positions()
            .iter()
            .map(|p| distance(&user, p).powf(-3.52) * 10f64.powf(-fspl / 10.0))
            .collect();
        let mut expected = 0.0;
        for g in &gains {
            expected += (pt / 9.0) * g / noise;
        }
        let got = cellfree_snr(&CellFreeLink {
            gains,
            total_power_mw: pt,
            noise_mw: noise,
        });
        assert!((got - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn siso_values() {
        assert_eq!(se_siso(0.0), 0.0);
        assert!(close(se_siso(db_to_linear(18.48)), 6.16, 0.01));
        assert!(close(se_siso(db_to_linear(6.6)), 2.47, 0.01));
    }

    #[test]
    fn mimo_bounds() {
        assert_eq!(se_mimo_upper(7.0, 1), se_siso(7.0));
        assert_eq!(se_mimo_upper(15.0, 4), 16.0);
        assert!(close(se_mimo_upper(db_to_linear(18.48), 4), 24.65, 0.05));
    }

    #[test]
    fn mimo_eigen_cases() {
        let full = se_mimo_eigen(&[4.0; 4], 9.0, 4).unwrap();
        assert!(close(full, 4.0 * 10f64.log2(), 1e-12));
        let identity = se_mimo_eigen(&[1.0; 4], 3.0, 4).unwrap();
        assert!(close(identity, 4.0 * 1.75f64.log2(), 1e-12));
        assert!(close(identity, 3.229, 1e-3));
        let deficient = se_mimo_eigen(&[4.0, 4.0, 0.0, 0.0], 9.0, 4).unwrap();
        assert!(close(deficient, 2.0 * 10f64.log2(), 1e-12));
        assert!(se_mimo_eigen(&[-1.0], 1.0, 4).is_err());
        assert!(se_mimo_eigen(&[1.0; 5], 1.0, 4).is_err());
    }

    /// Dual route: log-det of `I + (snr/M)·H·Hᵀ` against the eigen form fed
    /// with the squared singular values of the same H.
    #[test]
    fn eigen_form_matches_log_det() {
        use nalgebra::{DMatrix, SMatrix};
        let h = SMatrix::<f64, 4, 4>::from_row_slice(&[
            0.9, -0.2, 0.4, 0.1, //
            0.3, 1.1, -0.5, 0.0, //
            -0.7, 0.2, 0.8, 0.6, //
            0.05, 0.4, 0.3, 1.3,
        ]);
        let snr = 12.0;
        let m = 4.0;
        let gram = DMatrix::from_column_slice(4, 4, (h * h.transpose()).as_slice());
        let logdet = (DMatrix::identity(4, 4) + gram * (snr / m))
            .determinant()
            .log2();
        let sv2: Vec<f64> = h.singular_values().iter().map(|s| s * s).collect();
        let eig = se_mimo_eigen(&sv2, snr, 4).unwrap();
        assert!((logdet - eig).abs() < 1e-10);
    }

    #[test]
    fn rank_weighting() {
        let s = 5.0;
        let full = RankDistribution::fixed(4).unwrap();
        assert!(close(rank_weighted_se(&full, s), 4.0 * se_siso(s), 1e-12));
        let mixed = RankDistribution::sixty_forty();
        assert!(close(rank_weighted_se(&mixed, s), 2.8 * se_siso(s), 1e-12));
        assert!(close(mixed.expected_layers(), 2.8, 1e-12));
        let siso = RankDistribution::fixed(1).unwrap();
        assert_eq!(rank_weighted_se(&siso, s), se_siso(s));
    }

    #[test]
    fn rank_distribution_validation() {
        assert!(RankDistribution::new([(2, 0.6), (4, 0.3)]).is_err());
        assert!(RankDistribution::new([(0, 1.0)]).is_err());
        assert!(RankDistribution::new([(2, -0.1), (4, 1.1)]).is_err());
        let d: RankDistribution = serde_json::from_str(r#"{"2":0.6,"4":0.4}"#).unwrap();
        assert_eq!(d, RankDistribution::sixty_forty());
        assert!(serde_json::from_str::<RankDistribution>(r#"{"2":0.5}"#).is_err());
    }

    #[test]
    fn implementation_loss() {
        assert_eq!(apply_il(10.0, 0.0), 10.0);
        assert_eq!(apply_il(10.0, 3.0), 7.0);
        assert!(close(apply_il(-1.37, 3.0), -4.37, 1e-12));
        assert!(close(il_se_gain(-1.37, 3.0, 2.0).unwrap(), 0.22, 0.01));
        assert!(close(il_se_gain(6.6, 3.0, 1.0).unwrap(), 0.29, 0.01));
        assert_eq!(il_se_gain(4.0, 3.0, 3.0).unwrap(), 0.0);
        assert!(il_se_gain(4.0, 2.0, 3.0).is_err());
    }

    #[test]
    fn real_world_values() {
        assert_eq!(real_world_se(1.0, 1.0, 3.0, 3.0), 1.0);
        assert!(close(real_world_se(0.467, 2.8, 18.48, 0.0), 8.05, 0.05));
        assert!(close(real_world_se(0.467, 2.8, 18.48, 3.0), 6.78, 0.05));
    }

    proptest! {
        #[test]
        fn sinr_monotone(
            serving in 1e-12f64..1e-6,
            interferers in proptest::collection::vec(1e-12f64..1e-6, 1..9),
            idx in 0usize..8,
            bump in 1.01f64..10.0,
        ) {
            let base = CellularLink { serving_gain: serving, interferer_gains: interferers.clone(), tx_power_mw: 1e3, noise_mw: 1e-9 };
            let s0 = cellular_sinr(&base);
            let mut worse = base.clone();
            let i = idx % interferers.len();
            worse.interferer_gains[i] *= bump;
            prop_assert!(cellular_sinr(&worse) < s0);
            let mut better = base.clone();
            better.serving_gain *= bump;
            prop_assert!(cellular_sinr(&better) > s0);
        }

        #[test]
        fn cellfree_permutation_invariant(gains in proptest::collection::vec(1e-12f64..1e-6, 1..12), rot in 0usize..12) {
            let a = CellFreeLink { gains: gains.clone(), total_power_mw: 1e3, noise_mw: 1e-9 };
            let mut g = gains.clone();
            g.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let k = rot % g.len();
            g.rotate_left(k);
            let b = CellFreeLink { gains: g, total_power_mw: 1e3, noise_mw: 1e-9 };
            let (x, y) = (cellfree_snr(&a), cellfree_snr(&b));
            prop_assert!((x - y).abs() <= 1e-12 * x);
        }

        #[test]
        fn eigen_full_rank_equals_upper(sinr in 0.0f64..1e4, m in 1u32..17) {
            let upper = se_mimo_upper(sinr, m);
            let eig = se_mimo_eigen(&vec![m as f64; m as usize], sinr, m).unwrap();
            prop_assert!((upper - eig).abs() <= 1e-12 * upper.max(1e-300));
        }

        #[test]
        fn rank_se_linear_in_mixture(p in 0.0f64..1.0, w in 0.0f64..1.0, sinr in 0.0f64..1e3) {
            let a = RankDistribution::new([(1, p), (3, 1.0 - p)]).unwrap();
            let b = RankDistribution::new([(2, 0.25), (4, 0.75)]).unwrap();
            let mix = RankDistribution::new(
                a.iter().map(|(r, q)| (r, w * q)).chain(b.iter().map(|(r, q)| (r, (1.0 - w) * q))),
            ).unwrap();
            let lhs = rank_weighted_se(&mix, sinr);
            let rhs = w * rank_weighted_se(&a, sinr) + (1.0 - w) * rank_weighted_se(&b, sinr);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0));
        }

        #[test]
        fn il_gain_non_negative(sinr in -20.0f64..40.0, reference in 0.0f64..6.0, frac in 0.0f64..1.0) {
            let new = reference * frac;
            prop_assert!(il_se_gain(sinr, reference, new).unwrap() >= 0.0);
        }
    }
}
