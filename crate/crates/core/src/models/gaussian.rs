//! Two-parameter Gaussian model `y = theta_1 + theta_2 + eps` with a Gibbs
//! sampler and the classic seeded bugs.
//!
//! The prior on `theta` is bivariate normal with common mean `mu`, common
//! standard deviation `sigma` and correlation `rho`; the noise has variance
//! `noise_var`. The reference configuration is `(0, 10, 0, 0.1)`.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::standard_normal;
use crate::error::{invalid, Result};
use crate::model::{GenerativeModel, KernelFamily, ParamSpace, TestFunction, ValueKind};
use crate::rng::mix64;

pub type Theta = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub mu: f64,
    pub sigma: f64,
    pub rho: f64,
    pub noise_var: f64,
}

impl Default for GaussianParams {
    fn default() -> Self {
        GaussianParams {
            mu: 0.0,
            sigma: 10.0,
            rho: 0.0,
            noise_var: 0.1,
        }
    }
}

impl GaussianParams {
    pub fn new(mu: f64, sigma: f64, rho: f64, noise_var: f64) -> Result<Self> {
        let p = GaussianParams { mu, sigma, rho, noise_var };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !(self.noise_var > 0.0) {
            return Err(invalid("sigma and noise_var must be positive"));
        }
        if !(self.rho.abs() < 1.0) {
            return Err(invalid("rho must lie in (-1, 1)"));
        }
        if !self.mu.is_finite() {
            return Err(invalid("mu must be finite"));
        }
        Ok(())
    }

    /// Variance of `theta_i` given `theta_j` under the prior alone.
    fn prior_conditional_var(&self) -> f64 {
        self.sigma * self.sigma * (1.0 - self.rho * self.rho)
    }
}

#[derive(Clone, Debug)]
pub struct GaussianModel {
    params: GaussianParams,
    // Lower Cholesky factor of the prior covariance.
    chol: [[f64; 2]; 2],
}

impl GaussianModel {
    pub fn new(params: GaussianParams) -> Result<Self> {
        params.validate()?;
        let s2 = params.sigma * params.sigma;
        let cov = [[s2, params.rho * s2], [params.rho * s2, s2]];
        let l11 = cov[0][0].sqrt();
        let l21 = cov[1][0] / l11;
        let d = cov[1][1] - l21 * l21;
        if !(d > 0.0) {
            return Err(invalid("prior covariance is not positive definite"));
        }
        Ok(GaussianModel {
            params,
            chol: [[l11, 0.0], [l21, d.sqrt()]],
        })
    }

    pub fn params(&self) -> &GaussianParams {
        &self.params
    }

    pub fn prior_cholesky(&self) -> [[f64; 2]; 2] {
        self.chol
    }

    pub fn prior_density(&self, theta: &Theta) -> f64 {
        self.log_prior_density(theta).exp()
    }

    pub fn log_prior_density(&self, theta: &Theta) -> f64 {
        let p = &self.params;
        let s2 = p.sigma * p.sigma;
        let one_m_r2 = 1.0 - p.rho * p.rho;
        let a = theta[0] - p.mu;
        let b = theta[1] - p.mu;
        let quad = (a * a - 2.0 * p.rho * a * b + b * b) / (s2 * one_m_r2);
        -(2.0 * PI * s2 * one_m_r2.sqrt()).ln() - 0.5 * quad
    }

    pub fn log_likelihood_density(&self, theta: &Theta, y: f64) -> f64 {
        let r = y - theta[0] - theta[1];
        -0.5 * (2.0 * PI * self.params.noise_var).ln() - 0.5 * r * r / self.params.noise_var
    }
}

impl GenerativeModel for GaussianModel {
    type Param = Theta;
    type Data = f64;

    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R) -> Theta {
        let z1 = standard_normal(rng);
        let z2 = standard_normal(rng);
        let mu = self.params.mu;
        [
            mu + self.chol[0][0] * z1,
            mu + self.chol[1][0] * z1 + self.chol[1][1] * z2,
        ]
    }

    fn sample_data<R: Rng + ?Sized>(&self, rng: &mut R, theta: &Theta) -> f64 {
        theta[0] + theta[1] + self.params.noise_var.sqrt() * standard_normal(rng)
    }

    fn log_prior(&self, theta: &Theta) -> Option<f64> {
        Some(self.log_prior_density(theta))
    }

    fn log_likelihood(&self, theta: &Theta, y: &f64) -> Option<f64> {
        Some(self.log_likelihood_density(theta, *y))
    }

    fn param_space(&self) -> ParamSpace {
        ParamSpace {
            dimension: 2,
            kinds: vec![ValueKind::Continuous; 2],
        }
    }
}

/// Mean and variance of `theta_i | y, theta_j` when the prior is `assumed`.
pub fn conditional_posterior(assumed: &GaussianParams, y: f64, theta_other: f64) -> (f64, f64) {
    let prior_var = assumed.prior_conditional_var();
    let prior_mean = assumed.mu + assumed.rho * (theta_other - assumed.mu);
    let precision = 1.0 / assumed.noise_var + 1.0 / prior_var;
    let var = 1.0 / precision;
    let mean = var * ((y - theta_other) / assumed.noise_var + prior_mean / prior_var);
    (mean, var)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GibbsBug {
    None,
    /// `y - theta_j` replaced by `y + theta_j` in the conditional mean.
    WrongExpectation,
    /// Variance terms in the conditional variance replaced by the matching
    /// standard deviations: `1 / (1/sigma_eps + 1/sigma)`.
    WrongVariance,
    /// Each conditional truncated to one side of its mean.
    Truncated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scan {
    /// A step is a sweep of two updates, each of a uniformly chosen coordinate.
    Random,
    /// Update coordinate 1 then coordinate 2 in every step.
    Systematic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GibbsVariant {
    pub bug: GibbsBug,
    pub scan: Scan,
    /// Prior the sampler believes in; may differ from the generative one.
    pub assumed: GaussianParams,
}

impl GibbsVariant {
    pub fn correct(scan: Scan) -> Self {
        GibbsVariant {
            bug: GibbsBug::None,
            scan,
            assumed: GaussianParams::default(),
        }
    }

    pub fn with_bug(bug: GibbsBug) -> Self {
        GibbsVariant {
            bug,
            scan: Scan::Random,
            assumed: GaussianParams::default(),
        }
    }

    pub fn with_assumed_prior(assumed: GaussianParams) -> Self {
        GibbsVariant {
            bug: GibbsBug::None,
            scan: Scan::Random,
            assumed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GibbsKernel {
    variant: GibbsVariant,
}

pub fn gibbs_kernel(variant: GibbsVariant) -> Result<GibbsKernel> {
    variant.assumed.validate()?;
    Ok(GibbsKernel { variant })
}

impl GibbsKernel {
    pub fn variant(&self) -> &GibbsVariant {
        &self.variant
    }

    /// Mean and variance actually used for coordinate `i`, bug included.
    pub fn update_moments(&self, y: f64, theta_other: f64) -> (f64, f64) {
        let assumed = &self.variant.assumed;
        let (mean, var) = conditional_posterior(assumed, y, theta_other);
        match self.variant.bug {
            GibbsBug::None | GibbsBug::Truncated => (mean, var),
            GibbsBug::WrongExpectation => {
                let (m, v) = conditional_posterior(assumed, y + 2.0 * theta_other, theta_other);
                (m, v)
            }
            GibbsBug::WrongVariance => {
                let sd_sum = 1.0 / assumed.noise_var.sqrt() + 1.0 / assumed.prior_conditional_var().sqrt();
                (mean, 1.0 / sd_sum)
            }
        }
    }

    /// Side of truncation for coordinate `i` of the kernel `K_y`: `true` means
    /// draws lie above the conditional mean. Fixed per `(y, i)`, pseudo-random
    /// across data sets.
    pub fn truncation_side(y: f64, coordinate: usize) -> bool {
        mix64(y.to_bits() ^ mix64(coordinate as u64 + 1)) & 1 == 1
    }

    fn update<R: Rng + ?Sized>(&self, rng: &mut R, y: f64, theta: &mut Theta, i: usize) {
        let (mean, var) = self.update_moments(y, theta[1 - i]);
        let z = standard_normal(rng);
        theta[i] = match self.variant.bug {
            GibbsBug::Truncated => {
                let half = z.abs() * var.sqrt();
                if Self::truncation_side(y, i) {
                    mean + half
                } else {
                    mean - half
                }
            }
            _ => mean + var.sqrt() * z,
        };
    }
}

impl KernelFamily<GaussianModel> for GibbsKernel {
    type Cache = ();

    fn prepare(&self, _y: &f64) {}

    fn step<R: Rng + ?Sized>(&self, rng: &mut R, y: &f64, _cache: &(), theta: &Theta) -> Result<Theta> {
        let mut next = *theta;
        match self.variant.scan {
            Scan::Random => {
                for _ in 0..2 {
                    let i = rng.random_range(0..2);
                    self.update(rng, *y, &mut next, i);
                }
            }
            Scan::Systematic => {
                self.update(rng, *y, &mut next, 0);
                self.update(rng, *y, &mut next, 1);
            }
        }
        Ok(next)
    }

    /// Random-scan kernels are reversible with respect to the joint that their
    /// (possibly wrong) conditionals describe; systematic scan is not.
    fn declared_reversible(&self) -> bool {
        self.variant.scan == Scan::Random
    }
}

/// `theta_1`, `theta_1^2`, `theta_1 theta_2`, prior density and likelihood.
pub fn standard_test_functions(model: &GaussianModel) -> Vec<TestFunction<GaussianModel>> {
    let prior = model.clone();
    let lik = model.clone();
    vec![
        TestFunction::continuous("theta1", |t: &Theta, _y: &f64| t[0]),
        TestFunction::continuous("theta1^2", |t: &Theta, _y: &f64| t[0] * t[0]),
        TestFunction::continuous("theta1*theta2", |t: &Theta, _y: &f64| t[0] * t[1]),
        TestFunction::continuous("prior", move |t: &Theta, _y: &f64| prior.prior_density(t)),
        TestFunction::continuous("likelihood", move |t: &Theta, y: &f64| {
            lik.log_likelihood_density(t, *y).exp()
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_substream;

    #[test]
    fn conditional_symmetry() {
        let (m, _) = conditional_posterior(&GaussianParams::default(), 0.0, 0.0);
        assert_eq!(m, 0.0);
    }

    #[test]
    fn conditional_reference_values() {
        let p = GaussianParams::default();
        let (m, v) = conditional_posterior(&p, 1.0, 0.0);
        assert!((v - 1.0 / (1.0 / 0.1 + 1.0 / 100.0)).abs() < 1e-15);
        assert!((v - 0.0999001).abs() < 1e-7);
        assert!((m - 100.0 / 100.1).abs() < 1e-12);
    }

    #[test]
    fn generalised_conditional_reduces_to_simple_form() {
        let p = GaussianParams::default();
        let mut rng = derive_substream(5, 0).rng();
        for _ in 0..20 {
            let y: f64 = rng.random_range(-30.0..30.0);
            let other: f64 = rng.random_range(-30.0..30.0);
            let (m, v) = conditional_posterior(&p, y, other);
            let s2 = p.sigma * p.sigma;
            let simple_mean = s2 / (p.noise_var + s2) * (y - other);
            let simple_var = 1.0 / (1.0 / p.noise_var + 1.0 / s2);
            assert!((m - simple_mean).abs() < 1e-12);
            assert!((v - simple_var).abs() < 1e-12);
        }
    }

    #[test]
    fn strongly_correlated_prior_still_factorises() {
        let m = GaussianModel::new(GaussianParams::new(0.0, 10.0, 0.99, 0.1).unwrap()).unwrap();
        let l = m.prior_cholesky();
        let cov10 = l[1][0] * l[0][0];
        assert!((cov10 - 99.0).abs() < 1e-9);
    }

    #[test]
    fn wrong_variance_magnitude() {
        let k = gibbs_kernel(GibbsVariant::with_bug(GibbsBug::WrongVariance)).unwrap();
        let (_, v) = k.update_moments(0.0, 0.0);
        let expected = 1.0 / (1.0 / 0.1f64.sqrt() + 1.0 / 10.0);
        assert!((v - expected).abs() < 1e-12);
        assert!((v - 0.306534).abs() < 1e-6);
    }

    #[test]
    fn wrong_expectation_flips_sign() {
        let k = gibbs_kernel(GibbsVariant::with_bug(GibbsBug::WrongExpectation)).unwrap();
        let (m, _) = k.update_moments(1.0, 2.0);
        let (good, _) = conditional_posterior(&GaussianParams::default(), 1.0, -2.0);
        // Same as the correct mean evaluated at y + theta_j.
        assert!((m - good).abs() < 1e-12);
    }

    #[test]
    fn truncated_draws_stay_on_one_side() {
        let k = gibbs_kernel(GibbsVariant::with_bug(GibbsBug::Truncated)).unwrap();
        let mut rng = derive_substream(6, 0).rng();
        for y in [-3.0, 0.5, 7.25, 11.0] {
            let theta = [1.0, -2.0];
            for n in 0..200 {
                let i = n % 2;
                let mut next = theta;
                k.update(&mut rng, y, &mut next, i);
                assert_eq!(next[1 - i], theta[1 - i]);
                let (mean, _) = k.update_moments(y, theta[1 - i]);
                if GibbsKernel::truncation_side(y, i) {
                    assert!(next[i] >= mean);
                } else {
                    assert!(next[i] <= mean);
                }
            }
        }
    }

    #[test]
    fn test_function_values() {
        let m = GaussianModel::new(GaussianParams::default()).unwrap();
        let f = standard_test_functions(&m);
        assert_eq!(f[0].evaluate(&[2.0, 3.0], &0.0), 2.0);
        assert_eq!(f[2].evaluate(&[2.0, 3.0], &0.0), 6.0);
        let mode = f[3].evaluate(&[0.0, 0.0], &0.0);
        assert!((mode - 1.0 / (2.0 * PI * 100.0)).abs() < 1e-15);
        assert!((mode - 1.5915e-3).abs() < 1e-7);
    }

    #[test]
    fn data_moments() {
        let m = GaussianModel::new(GaussianParams::default()).unwrap();
        let mut rng = derive_substream(7, 0).rng();
        let n = 100_000;
        let ys: Vec<f64> = (0..n)
            .map(|_| {
                let t = m.sample_prior(&mut rng);
                m.sample_data(&mut rng, &t)
            })
            .collect();
        let mean = ys.iter().sum::<f64>() / n as f64;
        let var = ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        // sd of the sample variance of a normal is var * sqrt(2 / (n - 1)).
        let se = 200.1 * (2.0 / (n - 1) as f64).sqrt();
        assert!((var - 200.1).abs() < 3.0 * se, "var {var}");

        let shifted = GaussianModel::new(GaussianParams { mu: 10.0, ..GaussianParams::default() }).unwrap();
        let ys: Vec<f64> = (0..n)
            .map(|_| {
                let t = shifted.sample_prior(&mut rng);
                shifted.sample_data(&mut rng, &t)
            })
            .collect();
        let mean = ys.iter().sum::<f64>() / n as f64;
        assert!((mean - 20.0).abs() < 3.0 * (200.1f64 / n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn reversibility_declaration() {
        assert!(gibbs_kernel(GibbsVariant::correct(Scan::Random)).unwrap().declared_reversible());
        assert!(!gibbs_kernel(GibbsVariant::correct(Scan::Systematic)).unwrap().declared_reversible());
    }
}
