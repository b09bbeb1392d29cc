//! Tuning grid for the sequential wrapper: a KS test of i.i.d. normal draws
//! against `N(0, 1)`, with the first-batch size chosen so every `(k, delta)`
//! has the same expected effort under the null.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::dist::standard_normal;
use crate::error::Result;
use crate::exact::PValueVector;
use crate::rng::RngStream;
use crate::sequential::{matched_initial_size, sequential_test, SequentialConfig};
use crate::stats::ks_one_sample;

use super::{rejection_rate, RateEstimate, TableRow};

pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Distribution of the i.i.d. draws, and the level of the wrapper.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuningScenario {
    pub label: String,
    pub mean: f64,
    pub sd: f64,
    pub alpha: f64,
}

impl TuningScenario {
    pub fn new(mean: f64, sd: f64, alpha: f64) -> Self {
        let label = if alpha != 1e-5 {
            format!("N({mean},{}),alpha={alpha}", sd * sd)
        } else if sd == 1.0 {
            format!("N({mean},1)")
        } else {
            format!("N({mean},{sd}^2)")
        };
        TuningScenario { label, mean, sd, alpha }
    }
}

/// Columns for a single-shot size of `10^4`.
pub fn large_sample_scenarios() -> Vec<TuningScenario> {
    vec![
        TuningScenario::new(0.0, 1.0, 0.01),
        TuningScenario::new(0.0, 1.0, 1e-5),
        TuningScenario::new(0.05, 1.0, 1e-5),
        TuningScenario::new(0.03, 1.0, 1e-5),
        TuningScenario::new(0.02, 1.0, 1e-5),
        TuningScenario::new(0.0, 0.95, 1e-5),
        TuningScenario::new(0.0, 0.97, 1e-5),
    ]
}

/// Columns for a single-shot size of `10^3`.
pub fn small_sample_scenarios() -> Vec<TuningScenario> {
    vec![
        TuningScenario::new(0.0, 1.0, 0.01),
        TuningScenario::new(0.0, 1.0, 1e-5),
        TuningScenario::new(0.15, 1.0, 1e-5),
        TuningScenario::new(0.1, 1.0, 1e-5),
        TuningScenario::new(0.05, 1.0, 1e-5),
        TuningScenario::new(0.0, 0.85, 1e-5),
        TuningScenario::new(0.0, 0.9, 1e-5),
    ]
}

/// `(k, delta)` rows: `k = 1` alone, then `k` in 3, 5, ..., 11 with `delta`
/// in 1, 2, 4.
pub fn default_grid() -> Vec<(usize, f64)> {
    let mut g = vec![(1, 1.0)];
    for k in [3, 5, 7, 9, 11] {
        for d in [1.0, 2.0, 4.0] {
            g.push((k, d));
        }
    }
    g
}

/// One batch: `n` draws from `N(mean, sd^2)` tested against `N(0, 1)`.
pub fn ks_iid_batch(mean: f64, sd: f64, n: usize, stream: RngStream) -> Result<PValueVector> {
    let mut rng = stream.rng();
    let x: Vec<f64> = (0..n).map(|_| mean + sd * standard_normal(&mut rng)).collect();
    let outcome = ks_one_sample(&x, standard_normal_cdf)?;
    Ok(PValueVector::new(vec!["ks".into()], vec![outcome.p_value], n, n as u64))
}

/// Rejection rate of the wrapper for one scenario and one grid point.
pub fn tuning_rate(
    scenario: &TuningScenario,
    k: usize,
    delta: f64,
    single_size: usize,
    runs: usize,
    stream: RngStream,
) -> Result<RateEstimate> {
    let n0 = matched_initial_size(single_size, scenario.alpha, k, delta)?;
    let seq = SequentialConfig::new(scenario.alpha, k, delta, n0)?;
    rejection_rate(runs, stream, |s| {
        let mut source = |n: usize, b: RngStream| ks_iid_batch(scenario.mean, scenario.sd, n, b);
        Ok(sequential_test(&mut source, &seq, s)?.failed())
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuningConfig {
    pub single_size: usize,
    pub runs: usize,
    pub grid: Vec<(usize, f64)>,
    pub scenarios: Vec<TuningScenario>,
}

impl TuningConfig {
    pub fn large(runs: usize) -> Self {
        TuningConfig {
            single_size: 10_000,
            runs,
            grid: default_grid(),
            scenarios: large_sample_scenarios(),
        }
    }

    pub fn small(runs: usize) -> Self {
        TuningConfig {
            single_size: 1000,
            runs,
            grid: default_grid(),
            scenarios: small_sample_scenarios(),
        }
    }
}

pub fn tuning_table(config: &TuningConfig, stream: RngStream) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for (gi, &(k, delta)) in config.grid.iter().enumerate() {
        for (si, scenario) in config.scenarios.iter().enumerate() {
            let s = stream.substream(gi as u64).substream(si as u64);
            let rate = tuning_rate(scenario, k, delta, config.single_size, config.runs, s)?;
            rows.push(TableRow {
                scenario: scenario.label.clone(),
                test: format!("k={k};delta={delta}"),
                function: "ks".into(),
                rate,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_values() {
        assert!((standard_normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((standard_normal_cdf(1.959963984540054) - 0.975).abs() < 1e-9);
    }

    #[test]
    fn grid_shape() {
        let g = default_grid();
        assert_eq!(g.len(), 16);
        assert_eq!(g[0], (1, 1.0));
    }

    #[test]
    fn labels() {
        assert_eq!(TuningScenario::new(0.03, 1.0, 1e-5).label, "N(0.03,1)");
        assert_eq!(TuningScenario::new(0.0, 0.95, 1e-5).label, "N(0,0.95^2)");
        assert_eq!(TuningScenario::new(0.0, 1.0, 0.01).label, "N(0,1),alpha=0.01");
    }
}
