use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    Db,
    BpsPerHz,
}

impl std::fmt::Display for Units {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Units::Db => "dB",
            Units::BpsPerHz => "bps/Hz",
        })
    }
}

/// Sorted Monte-Carlo samples with CDF and quantile queries.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
    units: Units,
}

impl EmpiricalDistribution {
    /// Sorts `samples`. NaNs are rejected.
    pub fn new(mut samples: Vec<f64>, units: Units) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        if samples.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid("samples", "NaN sample"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self {
            sorted: samples,
            units,
        })
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }

    /// Quantile by linear interpolation between order statistics
    /// (position `p·(n−1)`).
    pub fn percentile(&self, p: f64) -> Result<f64> {
        percentile(&self.sorted, p)
    }

    /// `(cdf, value)` pairs with `cdf = (i+1)/n`.
    pub fn cdf_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(move |(i, &v)| ((i + 1) as f64 / n, v))
    }

    /// A new distribution with `f` applied to every sample.
    pub fn map(&self, units: Units, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.sorted.iter().map(|&v| f(v)).collect(), units)
    }
}

/// Quantile of an ascending slice, linear interpolation.
pub fn percentile(sorted: &[f64], p: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("percentile", format!("{p} not in [0, 1]")));
    }
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    Ok(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quantiles() {
        let d = EmpiricalDistribution::new(vec![5.0, 2.0, 4.0, 1.0, 3.0], Units::Db).unwrap();
        assert_eq!(d.percentile(0.5).unwrap(), 3.0);
        assert_eq!(d.percentile(0.0).unwrap(), 1.0);
        assert_eq!(d.percentile(1.0).unwrap(), 5.0);
        let two = EmpiricalDistribution::new(vec![10.0, 0.0], Units::Db).unwrap();
        assert_eq!(two.percentile(0.25).unwrap(), 2.5);
    }

    #[test]
    fn errors() {
        assert_eq!(
            EmpiricalDistribution::new(vec![], Units::Db),
            Err(Error::EmptyDistribution)
        );
        assert_eq!(percentile(&[], 0.5), Err(Error::EmptyDistribution));
        assert!(percentile(&[1.0], 1.5).is_err());
        assert!(percentile(&[1.0], -0.1).is_err());
        assert!(EmpiricalDistribution::new(vec![f64::NAN], Units::Db).is_err());
    }

    #[test]
    fn single_sample_cdf() {
        let d = EmpiricalDistribution::new(vec![4.2], Units::BpsPerHz).unwrap();
        assert_eq!(d.cdf_points().collect::<Vec<_>>(), vec![(1.0, 4.2)]);
        assert_eq!(d.percentile(0.1).unwrap(), 4.2);
    }

    proptest! {
        #[test]
        fn quantile_shift_invariant(
            v in proptest::collection::vec(-50.0f64..50.0, 1..200),
            shift in -20.0f64..20.0,
            p in 0.0f64..=1.0,
        ) {
            let a = EmpiricalDistribution::new(v.clone(), Units::Db).unwrap();
            let b = a.map(Units::Db, |x| x + shift).unwrap();
            let (qa, qb) = (a.percentile(p).unwrap(), b.percentile(p).unwrap());
            prop_assert!((qb - qa - shift).abs() < 1e-9);
            prop_assert!(qa >= a.min() && qa <= a.max());
        }

        #[test]
        fn quantile_monotone(v in proptest::collection::vec(-50.0f64..50.0, 1..200), p in 0.0f64..1.0, dp in 0.0f64..1.0) {
            let a = EmpiricalDistribution::new(v, Units::Db).unwrap();
            let q = (p + dp).min(1.0);
            prop_assert!(a.percentile(q).unwrap() >= a.percentile(p).unwrap());
        }
    }
}
