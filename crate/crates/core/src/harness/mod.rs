//! Drivers that replicate whole tests to estimate rejection rates, and the
//! experiment grids built on them.

pub mod gaussian;
pub mod rjmcmc;
pub mod tuning;

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{rank_test, two_sample_test, RankConfig, TwoSampleConfig};
use crate::model::{GenerativeModel, KernelFamily, OrdinalRanking, TestFunction};
use crate::parallel::replicate;
use crate::rng::RngStream;
use crate::sequential::{sequential_test, SequentialConfig, SequentialVerdict};

/// Fraction of rejecting runs with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub rejections: usize,
    pub runs: usize,
    pub rate: f64,
    pub std_error: f64,
}

impl RateEstimate {
    pub fn from_counts(rejections: usize, runs: usize) -> Self {
        let rate = if runs == 0 { 0.0 } else { rejections as f64 / runs as f64 };
        let std_error = if runs == 0 { 0.0 } else { (rate * (1.0 - rate) / runs as f64).sqrt() };
        RateEstimate {
            rejections,
            runs,
            rate,
            std_error,
        }
    }
}

/// Runs `runs` independent replications of a reject/accept experiment.
pub fn rejection_rate<F>(runs: usize, stream: RngStream, f: F) -> Result<RateEstimate>
where
    F: Fn(RngStream) -> Result<bool> + Sync + Send,
{
    let outcomes = replicate(runs, stream, f)?;
    Ok(RateEstimate::from_counts(outcomes.iter().filter(|&&r| r).count(), runs))
}

/// Which exact test generates the p-values, with its per-batch settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExactTest {
    TwoSample(TwoSampleConfig),
    Rank(RankConfig),
}

impl ExactTest {
    /// The sample size the configuration was written for: `n_fitted` or
    /// `n_reps`.
    pub fn base_size(&self) -> usize {
        match self {
            ExactTest::TwoSample(c) => c.n_fitted,
            ExactTest::Rank(c) => c.n_reps,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExactTest::TwoSample(_) => "two-sample",
            ExactTest::Rank(_) => "rank",
        }
    }
}

/// The chosen exact test inside the sequential wrapper. The sequential
/// configuration's `initial_size` sets the first batch size.
pub fn run_sequential<M, K>(
    model: &M,
    kernel: &K,
    test: &ExactTest,
    functions: &[TestFunction<M>],
    seq: &SequentialConfig,
    stream: RngStream,
) -> Result<SequentialVerdict>
where
    M: GenerativeModel,
    K: KernelFamily<M>,
{
    match test {
        ExactTest::TwoSample(cfg) => {
            let mut source = |n: usize, s: RngStream| two_sample_test(model, kernel, &cfg.with_size(n), functions, s);
            sequential_test(&mut source, seq, stream)
        }
        ExactTest::Rank(cfg) => {
            let rankings: Vec<OrdinalRanking<M>> = functions.iter().map(OrdinalRanking::from).collect();
            let mut source = |n: usize, s: RngStream| rank_test(model, kernel, &cfg.with_size(n), &rankings, s);
            sequential_test(&mut source, seq, stream)
        }
    }
}

/// One line of a rejection-rate table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub scenario: String,
    pub test: String,
    pub function: String,
    #[serde(flatten)]
    pub rate: RateEstimate,
}

pub const CSV_HEADER: &str = "scenario,test,function,rejection_rate,mc_std_error,rejections,runs";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_csv<W: Write>(rows: &[TableRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.4},{:.4},{},{}",
            csv_field(&r.scenario),
            csv_field(&r.test),
            csv_field(&r.function),
            r.rate.rate,
            r.rate.std_error,
            r.rate.rejections,
            r.rate.runs
        )?;
    }
    Ok(())
}

pub const HISTOGRAM_CSV_HEADER: &str = "sampler,test,iteration,function,series,bin,count";

/// Every histogram recorded by a set of sequential runs, one count per line.
pub fn write_histogram_csv<W: Write>(runs: &[(&str, &str, &SequentialVerdict)], mut out: W) -> io::Result<()> {
    writeln!(out, "{HISTOGRAM_CSV_HEADER}")?;
    for (sampler, test, verdict) in runs {
        for it in &verdict.iterations {
            for h in &it.histograms {
                for series in &h.series {
                    for (bin, count) in h.bins.iter().zip(&series.counts) {
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{}",
                            csv_field(sampler),
                            csv_field(test),
                            it.iteration,
                            csv_field(&h.label),
                            csv_field(&series.name),
                            csv_field(bin),
                            count
                        )?;
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_estimate() {
        let r = RateEstimate::from_counts(10, 1000);
        assert!((r.rate - 0.01).abs() < 1e-15);
        assert!((r.std_error - (0.01f64 * 0.99 / 1000.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn csv_layout() {
        let rows = vec![TableRow {
            scenario: "a,b".into(),
            test: "rank".into(),
            function: "theta1".into(),
            rate: RateEstimate::from_counts(1, 4),
        }];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, format!("{CSV_HEADER}\n\"a,b\",rank,theta1,0.2500,0.2165,1,4\n"));
    }
}
