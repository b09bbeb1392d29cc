//! Goodness-of-fit statistics and p-values.
//!
//! All functions are pure. Every p-value is clamped to `[1e-300, 1]` so that
//! downstream code can take logarithms without special cases.

mod chi2;
mod ks;

pub use chi2::{chi2_sf, chi2_two_sample_discrete, chi2_uniformity, tabulate_pair};
pub use ks::{kolmogorov_sf, ks_one_sample, ks_one_sample_uniform01, ks_two_sample};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Smallest p-value ever reported.
pub const P_FLOOR: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub n_effective: usize,
}

impl TestOutcome {
    pub(crate) fn new(statistic: f64, p_value: f64, n_effective: usize) -> Self {
        TestOutcome {
            statistic,
            p_value: clamp_p(p_value),
            n_effective: n_effective.max(1),
        }
    }
}

#[inline]
pub(crate) fn clamp_p(p: f64) -> f64 {
    if p.is_nan() {
        return 1.0;
    }
    p.clamp(P_FLOOR, 1.0)
}

/// Bonferroni combination `min(1, d * min_j p_j)`.
pub fn bonferroni_min(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(invalid("bonferroni_min needs at least one p-value"));
    }
    if let Some(bad) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(invalid(format!("p-value {bad} outside [0, 1]")));
    }
    let smallest = p.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((smallest * p.len() as f64).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bonferroni_examples() {
        assert_eq!(bonferroni_min(&[0.5]).unwrap(), 0.5);
        assert!((bonferroni_min(&[0.01, 0.5, 0.9]).unwrap() - 0.03).abs() < 1e-15);
        assert_eq!(bonferroni_min(&[0.6, 0.7]).unwrap(), 1.0);
        assert!(bonferroni_min(&[]).is_err());
        assert!(bonferroni_min(&[1.5]).is_err());
    }

    #[test]
    fn clamp_keeps_range() {
        assert_eq!(clamp_p(0.0), P_FLOOR);
        assert_eq!(clamp_p(2.0), 1.0);
        assert_eq!(clamp_p(f64::NAN), 1.0);
    }
}
