//! Samplers for the distributions the benchmark models need.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{invalid, Result};

pub fn sample_normal<R: Rng + ?Sized>(rng: &mut R, mean: f64, sd: f64) -> Result<f64> {
    if !(sd > 0.0) || !mean.is_finite() {
        return Err(invalid(format!("normal needs finite mean and sd > 0, got ({mean}, {sd})")));
    }
    Ok(mean + sd * standard_normal(rng))
}

#[inline]
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Gamma with the given shape and scale (mean `shape * scale`).
pub fn sample_gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64, scale: f64) -> Result<f64> {
    let g = Gamma::new(shape, scale)
        .map_err(|e| invalid(format!("gamma({shape}, {scale}): {e}")))?;
    Ok(g.sample(rng))
}

/// Inverse gamma: if `X ~ Gamma(shape, rate = scale)` then `1/X` has this law,
/// with mean `scale / (shape - 1)` for `shape > 1`.
pub fn sample_inverse_gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64, scale: f64) -> Result<f64> {
    if !(scale > 0.0) {
        return Err(invalid(format!("inverse gamma needs scale > 0, got {scale}")));
    }
    Ok(1.0 / sample_gamma(rng, shape, 1.0 / scale)?)
}

/// Index drawn with probability proportional to `weights`.
pub fn sample_categorical<R: Rng + ?Sized>(rng: &mut R, weights: &[f64]) -> Result<usize> {
    let total = checked_total(weights)?;
    Ok(categorical_unchecked(rng, weights, total))
}

fn checked_total(weights: &[f64]) -> Result<f64> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(invalid("categorical weights must be finite and nonnegative"));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(invalid("categorical weights must have a positive sum"));
    }
    Ok(total)
}

pub(crate) fn categorical_unchecked<R: Rng + ?Sized>(rng: &mut R, weights: &[f64], total: f64) -> usize {
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    // Rounding can leave `target` just above the running sum.
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

/// Poisson(rate) restricted to `{0, ..., k_max}`, normalised explicitly.
pub fn truncated_poisson_pmf(rate: f64, k_max: usize) -> Result<Vec<f64>> {
    if !(rate > 0.0) {
        return Err(invalid(format!("poisson rate must be positive, got {rate}")));
    }
    Ok(normalised_from_log((0..=k_max).map(|l| l as f64 * rate.ln() - ln_factorial(l))))
}

pub fn sample_truncated_poisson<R: Rng + ?Sized>(rng: &mut R, rate: f64, k_max: usize) -> Result<usize> {
    let pmf = truncated_poisson_pmf(rate, k_max)?;
    Ok(categorical_unchecked(rng, &pmf, 1.0))
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    statrs::function::gamma::ln_gamma(n as f64 + 1.0)
}

pub(crate) fn normalised_from_log(log_weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let logs: Vec<f64> = log_weights.collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let unnorm: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = unnorm.iter().sum();
    unnorm.into_iter().map(|w| w / total).collect()
}
