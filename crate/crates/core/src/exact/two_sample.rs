use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{GenerativeModel, KernelFamily, TestFunction, ValueKind};
use crate::parallel::replicate;
use crate::rng::{Role, RngStream};
use crate::stats::{chi2_two_sample_discrete, ks_one_sample_uniform01, ks_two_sample, tabulate_pair};

use super::{Histogram, HistogramSeries, PValueVector};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleConfig {
    /// Kernel steps applied to each fitted sample (`L`).
    pub steps: usize,
    pub n_fitted: usize,
    pub n_direct: usize,
    /// Resample `y` from the likelihood after every kernel step.
    pub gibbs_extension: bool,
}

impl TwoSampleConfig {
    pub fn new(steps: usize, n_fitted: usize, n_direct: usize) -> Self {
        TwoSampleConfig {
            steps,
            n_fitted,
            n_direct,
            gibbs_extension: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 || self.n_fitted == 0 || self.n_direct == 0 {
            return Err(invalid("two-sample test needs steps, n_fitted and n_direct >= 1"));
        }
        Ok(())
    }

    /// Same configuration with `n_fitted = n` and `n_direct` scaled in
    /// proportion.
    pub fn with_size(&self, n: usize) -> Self {
        let ratio = self.n_direct as f64 / self.n_fitted as f64;
        TwoSampleConfig {
            n_fitted: n,
            n_direct: ((n as f64 * ratio).round() as usize).max(1),
            ..*self
        }
    }
}

/// One fitted draw: `theta' ~ prior`, `y' ~ p(. | theta')`, then `steps`
/// kernel applications at fixed `y'` (or alternating with `y` refreshes under
/// the Gibbs extension).
pub fn fitted_sample<M, K>(
    model: &M,
    kernel: &K,
    steps: usize,
    gibbs_extension: bool,
    stream: RngStream,
) -> Result<(M::Param, M::Data)>
where
    M: GenerativeModel,
    K: KernelFamily<M>,
{
    if steps == 0 {
        return Err(invalid("fitted_sample needs at least one kernel step"));
    }
    let mut theta = model.sample_prior(&mut stream.role(Role::Prior));
    let mut y = model.sample_data(&mut stream.role(Role::Data), &theta);
    let mut chain = stream.role(Role::Chain);
    let mut cache = kernel.prepare(&y);
    for _ in 0..steps {
        theta = kernel.step(&mut chain, &y, &cache, &theta)?;
        if gibbs_extension {
            y = model.sample_data(&mut chain, &theta);
            cache = kernel.prepare(&y);
        }
    }
    Ok((theta, y))
}

pub fn direct_sample<M: GenerativeModel>(model: &M, stream: RngStream) -> (M::Param, M::Data) {
    let theta = model.sample_prior(&mut stream.role(Role::Prior));
    let y = model.sample_data(&mut stream.role(Role::Data), &theta);
    (theta, y)
}

fn evaluate_all<M: GenerativeModel>(
    functions: &[TestFunction<M>],
    draws: &[(M::Param, M::Data)],
) -> Vec<Vec<f64>> {
    functions
        .iter()
        .map(|f| draws.iter().map(|(t, y)| f.evaluate(t, y)).collect())
        .collect()
}

/// Compares `n_fitted` fitted draws with `n_direct` direct draws, one
/// p-value per test function. Continuous functions use the two-sample KS test,
/// discrete ones the chi-square homogeneity test.
pub fn two_sample_test<M, K>(
    model: &M,
    kernel: &K,
    config: &TwoSampleConfig,
    functions: &[TestFunction<M>],
    stream: RngStream,
) -> Result<PValueVector>
where
    M: GenerativeModel,
    K: KernelFamily<M>,
{
    config.validate()?;
    if functions.is_empty() {
        return Err(invalid("two-sample test needs at least one test function"));
    }
    let fitted = replicate(config.n_fitted, stream.substream(0), |s| {
        fitted_sample(model, kernel, config.steps, config.gibbs_extension, s)
    })?;
    let direct = replicate(config.n_direct, stream.substream(1), |s| Ok(direct_sample(model, s)))?;

    let fitted_values = evaluate_all(functions, &fitted);
    let direct_values = evaluate_all(functions, &direct);

    let mut p_values = Vec::with_capacity(functions.len());
    let mut histograms = Vec::new();
    for (f, (a, b)) in functions.iter().zip(fitted_values.iter().zip(&direct_values)) {
        let outcome = match f.kind() {
            ValueKind::Continuous => ks_two_sample(a, b)?,
            ValueKind::Discrete => {
                let (values, ca, cb) = tabulate_pair(a, b);
                histograms.push(Histogram {
                    label: f.name().to_string(),
                    bins: values.iter().map(|v| v.to_string()).collect(),
                    series: vec![
                        HistogramSeries { name: "fitted".into(), counts: ca.clone() },
                        HistogramSeries { name: "direct".into(), counts: cb.clone() },
                    ],
                });
                if values.len() < 2 {
                    // Both samples sit on one value: nothing to distinguish.
                    p_values.push(1.0);
                    continue;
                }
                chi2_two_sample_discrete(&ca, &cb)?
            }
        };
        p_values.push(outcome.p_value);
    }

    let mut out = PValueVector::new(
        functions.iter().map(|f| f.name().to_string()).collect(),
        p_values,
        config.n_fitted,
        (config.n_fitted * config.steps) as u64,
    );
    out.histograms = histograms;
    Ok(out)
}

/// Variant of the two-sample test where the direct sample is replaced by a
/// known marginal: each test function is paired with the CDF of its value
/// under the prior and fitted values are tested against it with the
/// one-sample KS test.
pub fn one_sample_fitted_test<M, K, C>(
    model: &M,
    kernel: &K,
    config: &TwoSampleConfig,
    functions: &[(TestFunction<M>, C)],
    stream: RngStream,
) -> Result<PValueVector>
where
    M: GenerativeModel,
    K: KernelFamily<M>,
    C: Fn(f64) -> f64 + Sync,
{
    config.validate()?;
    if functions.is_empty() {
        return Err(invalid("one-sample test needs at least one test function"));
    }
    let fitted = replicate(config.n_fitted, stream.substream(0), |s| {
        fitted_sample(model, kernel, config.steps, config.gibbs_extension, s)
    })?;
    let mut p_values = Vec::with_capacity(functions.len());
    for (f, cdf) in functions {
        let u: Vec<f64> = fitted.iter().map(|(t, y)| cdf(f.evaluate(t, y))).collect();
        p_values.push(ks_one_sample_uniform01(&u)?.p_value);
    }
    Ok(PValueVector::new(
        functions.iter().map(|(f, _)| f.name().to_string()).collect(),
        p_values,
        config.n_fitted,
        (config.n_fitted * config.steps) as u64,
    ))
}

