//! Sequential wrapper with a bounded false-rejection probability.
//!
//! Iteration `i` draws a batch of p-values, combines them with Bonferroni
//! into `q_i` and then fails if `q_i <= beta_i`, stops with OK if
//! `q_i > gamma + beta_i`, and otherwise tries again with
//! `beta_{i+1} = beta_i / gamma`. The sample size is multiplied by `delta`
//! once, after the first iteration. With `beta_1 = alpha / k` and
//! `gamma = beta_1^(1/k)` the overall probability of failing a correct sampler
//! is at most `alpha` whenever every p-value is super-uniform.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{Histogram, PValueVector};
use crate::rng::RngStream;
use crate::stats::bonferroni_min;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequentialConfig {
    pub alpha: f64,
    /// Maximum number of iterations (`k`).
    pub max_iterations: usize,
    /// Sample-size multiplier applied after the first iteration (`delta`).
    pub growth: f64,
    pub initial_size: usize,
}

impl SequentialConfig {
    /// Library defaults: `alpha = 1e-5`, `k = 7`, `delta = 4`.
    pub fn defaults(initial_size: usize) -> Self {
        SequentialConfig {
            alpha: 1e-5,
            max_iterations: 7,
            growth: 4.0,
            initial_size,
        }
    }

    pub fn new(alpha: f64, max_iterations: usize, growth: f64, initial_size: usize) -> Result<Self> {
        let cfg = SequentialConfig {
            alpha,
            max_iterations,
            growth,
            initial_size,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.growth >= 1.0) || !self.growth.is_finite() {
            return Err(invalid(format!("growth factor must be >= 1, got {}", self.growth)));
        }
        if self.initial_size == 0 {
            return Err(invalid("initial sample size must be >= 1"));
        }
        let t = thresholds(self.alpha, self.max_iterations)?;
        if t.gamma + t.betas[0] >= 1.0 {
            return Err(invalid("gamma + beta_1 >= 1: the procedure could never accept"));
        }
        Ok(())
    }

    pub fn thresholds(&self) -> Result<Thresholds> {
        thresholds(self.alpha, self.max_iterations)
    }

    /// Sample size used at iteration `i` (1-based).
    pub fn size_at(&self, iteration: usize) -> usize {
        if iteration <= 1 {
            self.initial_size
        } else {
            ((self.initial_size as f64 * self.growth).round() as usize).max(1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub gamma: f64,
    /// `beta_1, ..., beta_k`.
    pub betas: Vec<f64>,
}

pub fn thresholds(alpha: f64, k: usize) -> Result<Thresholds> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if k == 0 {
        return Err(invalid("k must be >= 1"));
    }
    let beta1 = alpha / k as f64;
    let gamma = beta1.powf(1.0 / k as f64);
    let betas: Vec<f64> = (0..k).map(|i| beta1 / gamma.powi(i as i32)).collect();
    let last = betas[k - 1];
    assert!(
        (last - gamma).abs() <= 1e-12 * gamma.max(1.0),
        "beta_k = {last} differs from gamma = {gamma}"
    );
    Ok(Thresholds { gamma, betas })
}

/// Expected extra effort relative to a single test, for exactly uniform
/// p-values of dimension one: `delta * sum_{i=2}^{k} gamma^(i-1)`.
pub fn expected_extra_effort_uniform(k: usize, delta: f64, gamma: f64) -> f64 {
    if k <= 1 {
        return 0.0;
    }
    delta * gamma * (1.0 - gamma.powi(k as i32 - 1)) / (1.0 - gamma)
}

/// Upper bound on the expected extra effort for super-uniform p-values:
/// `delta * sum_{i=2}^{k} prod_{j=1}^{i-1} (gamma + beta_j)`.
pub fn extra_effort_bound(k: usize, delta: f64, gamma: f64, betas: &[f64]) -> f64 {
    let mut total = 0.0;
    let mut reach = 1.0;
    for beta in betas.iter().take(k.saturating_sub(1)) {
        reach *= gamma + beta;
        total += reach;
    }
    delta * total
}

/// Initial sample size that matches, under the null, the expected effort of a
/// single test of size `single_size`.
pub fn matched_initial_size(single_size: usize, alpha: f64, k: usize, delta: f64) -> Result<usize> {
    let t = thresholds(alpha, k)?;
    let bound = extra_effort_bound(k, delta, t.gamma, &t.betas);
    Ok(((single_size as f64 / (1.0 + bound)).round() as usize).max(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Ok,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Fail,
    Accept,
    Continue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub sample_size: usize,
    pub labels: Vec<String>,
    pub p_values: Vec<f64>,
    pub q: f64,
    pub beta: f64,
    pub decision: Decision,
    pub effort: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub histograms: Vec<Histogram>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequentialVerdict {
    pub verdict: Verdict,
    pub gamma: f64,
    pub iterations: Vec<IterationRecord>,
    pub effort: u64,
}

impl SequentialVerdict {
    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn iterations_run(&self) -> usize {
        self.iterations.len()
    }
}

/// Anything that yields a batch of p-values for a requested sample size.
pub trait PValueSource {
    fn draw(&mut self, sample_size: usize, stream: RngStream) -> Result<PValueVector>;
}

impl<F> PValueSource for F
where
    F: FnMut(usize, RngStream) -> Result<PValueVector>,
{
    fn draw(&mut self, sample_size: usize, stream: RngStream) -> Result<PValueVector> {
        self(sample_size, stream)
    }
}

/// Runs the sequential procedure. Iteration `i` draws from
/// `stream.substream(i - 1)`.
pub fn sequential_test<S: PValueSource + ?Sized>(
    source: &mut S,
    config: &SequentialConfig,
    stream: RngStream,
) -> Result<SequentialVerdict> {
    config.validate()?;
    let t = config.thresholds()?;
    let mut iterations = Vec::new();
    let mut effort = 0u64;
    let mut dimension = None;
    let mut verdict = Verdict::Ok;

    for i in 1..=config.max_iterations {
        let n = config.size_at(i);
        let batch = source.draw(n, stream.substream(i as u64 - 1))?;
        match dimension {
            None => dimension = Some(batch.dimension()),
            Some(d) if d != batch.dimension() => {
                return Err(Error::Contract(format!(
                    "p-value dimension changed from {d} to {} at iteration {i}",
                    batch.dimension()
                )))
            }
            _ => {}
        }
        let q = bonferroni_min(&batch.p_values)?;
        let beta = t.betas[i - 1];
        let decision = if q <= beta {
            Decision::Fail
        } else if q > t.gamma + beta {
            Decision::Accept
        } else {
            Decision::Continue
        };
        effort += batch.effort;
        iterations.push(IterationRecord {
            iteration: i,
            sample_size: n,
            labels: batch.labels,
            p_values: batch.p_values,
            q,
            beta,
            decision,
            effort: batch.effort,
            histograms: batch.histograms,
        });
        match decision {
            Decision::Fail => {
                verdict = Verdict::Fail;
                break;
            }
            Decision::Accept => break,
            Decision::Continue => {}
        }
    }

    Ok(SequentialVerdict {
        verdict,
        gamma: t.gamma,
        iterations,
        effort,
    })
}
