//! The two exact tests: fitted-versus-direct two-sample comparison and the
//! pivot rank test, plus a detailed-balance checker for finite chains.

mod balance;
mod rank;
mod two_sample;

pub use balance::check_detailed_balance;
pub use rank::{rank_statistic, rank_statistics, rank_test, RankConfig};
pub use two_sample::{
    direct_sample, fitted_sample, one_sample_fitted_test, two_sample_test, TwoSampleConfig,
};

use serde::{Deserialize, Serialize};

/// Counts over named bins, kept for reports and plotting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub label: String,
    pub bins: Vec<String>,
    pub series: Vec<HistogramSeries>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramSeries {
    pub name: String,
    pub counts: Vec<u64>,
}

/// One batch of p-values, one per test function or ranking.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PValueVector {
    pub labels: Vec<String>,
    pub p_values: Vec<f64>,
    /// The sample size `n` the batch was generated with.
    pub sample_size: usize,
    /// Work spent, in kernel steps (or draws for i.i.d. sources).
    pub effort: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub histograms: Vec<Histogram>,
}

impl PValueVector {
    pub fn new(labels: Vec<String>, p_values: Vec<f64>, sample_size: usize, effort: u64) -> Self {
        PValueVector {
            labels,
            p_values,
            sample_size,
            effort,
            histograms: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.p_values.len()
    }
}
