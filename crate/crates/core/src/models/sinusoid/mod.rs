//! Detection of an unknown number of sinusoids in noise, sampled by
//! reversible-jump MCMC.
//!
//! The model is `y = D(w) a + eps` with `k` frequencies `w` in `(0, pi)`, a
//! g-prior on the amplitudes `a` and an inverse-gamma prior on the noise
//! variance. Amplitudes and noise variance are integrated out, so the
//! parameter seen by the tests is `(k, w)`.

mod design;
mod kernel;

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::dist::{categorical_unchecked, ln_factorial, sample_inverse_gamma, standard_normal, truncated_poisson_pmf};
use crate::error::{invalid, Result};
use crate::model::{GenerativeModel, ParamSpace, TestFunction, ValueKind};

pub use design::{
    backward_substitute_transpose, cholesky_in_place, design_matrix, forward_substitute, gram_matrix, quad_form_pk,
    DesignMatrixWorkspace,
};
pub use kernel::{birth_ratio, GfkProposal, MoveSet, RatioVariant, RjKernel, SinusoidCache};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KPrior {
    TruncatedPoisson,
    /// Mass proportional to `Lambda^l / (l!)^2`.
    AcceleratedPoisson,
    /// A point mass, for testing within-model kernels.
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinusoidParams {
    /// Signal length `N`.
    pub n: usize,
    pub lambda: f64,
    pub v0: f64,
    pub gamma0: f64,
    pub delta2: f64,
    pub k_max: usize,
    pub prior: KPrior,
    /// Random-walk scale of the local frequency kernel.
    pub sigma_rw: f64,
    /// Zero-padded length of the signal for the global frequency kernel.
    pub n_pad: usize,
}

impl Default for SinusoidParams {
    fn default() -> Self {
        SinusoidParams::with_length(64)
    }
}

impl SinusoidParams {
    pub fn with_length(n: usize) -> Self {
        SinusoidParams {
            n,
            lambda: 3.0,
            v0: 10.0,
            gamma0: 10.0,
            delta2: 64.0,
            k_max: n.saturating_sub(1) / 2,
            prior: KPrior::TruncatedPoisson,
            sigma_rw: 1.0 / 50.0,
            n_pad: 4 * n,
        }
    }

    pub fn with_prior(mut self, prior: KPrior) -> Self {
        self.prior = prior;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid("signal length must be at least 2"));
        }
        if self.k_max != (self.n - 1) / 2 {
            return Err(invalid("k_max must equal floor((N - 1) / 2)"));
        }
        for (name, v) in [
            ("lambda", self.lambda),
            ("v0", self.v0),
            ("gamma0", self.gamma0),
            ("delta2", self.delta2),
            ("sigma_rw", self.sigma_rw),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(format!("{name} must be positive")));
            }
        }
        if self.n_pad < self.n {
            return Err(invalid("padded length must be at least N"));
        }
        if let KPrior::Fixed(k) = self.prior {
            if k > self.k_max {
                return Err(invalid("fixed k exceeds k_max"));
            }
        }
        Ok(())
    }
}

/// Normalised pmf proportional to `Lambda^l / (l!)^2` on `0..=k_max`.
pub fn accelerated_poisson_pmf(lambda: f64, k_max: usize) -> Result<Vec<f64>> {
    if !(lambda > 0.0) {
        return Err(invalid("rate must be positive"));
    }
    let logs = (0..=k_max).map(|l| l as f64 * lambda.ln() - 2.0 * ln_factorial(l));
    Ok(crate::dist::normalised_from_log(logs))
}

/// pmf of the number of sinusoids under `params.prior`.
pub fn prior_pmf(params: &SinusoidParams) -> Result<Vec<f64>> {
    match params.prior {
        KPrior::TruncatedPoisson => truncated_poisson_pmf(params.lambda, params.k_max),
        KPrior::AcceleratedPoisson => accelerated_poisson_pmf(params.lambda, params.k_max),
        KPrior::Fixed(k) => {
            let mut p = vec![0.0; params.k_max + 1];
            p[k] = 1.0;
            Ok(p)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinusoidState {
    /// Frequencies in `(0, pi)`; the model order is `w.len()`.
    pub w: Vec<f64>,
}

impl SinusoidState {
    pub fn new(w: Vec<f64>) -> Self {
        SinusoidState { w }
    }

    pub fn k(&self) -> usize {
        self.w.len()
    }

    pub fn is_valid(&self, k_max: usize) -> bool {
        self.w.len() <= k_max && self.w.iter().all(|&v| v > 0.0 && v < PI)
    }
}

#[derive(Clone, Debug)]
pub struct SinusoidModel {
    params: SinusoidParams,
    pmf: Vec<f64>,
}

impl SinusoidModel {
    pub fn new(params: SinusoidParams) -> Result<Self> {
        params.validate()?;
        let pmf = prior_pmf(&params)?;
        Ok(SinusoidModel { params, pmf })
    }

    pub fn params(&self) -> &SinusoidParams {
        &self.params
    }

    pub fn prior_pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// Log of the unnormalised posterior `p(k, w | y)` given `Q = y' P_k y`.
    pub fn log_target_from_quad_form(&self, k: usize, quad_form: f64) -> f64 {
        let p = &self.params;
        let pk = self.pmf.get(k).copied().unwrap_or(0.0);
        -0.5 * (p.n as f64 + p.v0) * (p.gamma0 + quad_form).ln() - k as f64 * (1.0 + p.delta2).ln() + pk.ln()
            - k as f64 * PI.ln()
    }

    /// Log of the unnormalised posterior `p(k, w | y)` on `(0, pi)^k`;
    /// `-inf` for a singular design or a state outside the support.
    pub fn target_log_density(&self, y: &[f64], state: &SinusoidState) -> f64 {
        if !state.is_valid(self.params.k_max) {
            return f64::NEG_INFINITY;
        }
        match quad_form_pk(y, &state.w, self.params.delta2) {
            Some(q) => self.log_target_from_quad_form(state.k(), q),
            None => f64::NEG_INFINITY,
        }
    }

    /// Normalised `log p(y | k, w)` with amplitudes and noise variance
    /// integrated out.
    pub fn log_marginal_likelihood(&self, y: &[f64], w: &[f64]) -> f64 {
        let p = &self.params;
        let Some(q) = quad_form_pk(y, w, p.delta2) else {
            return f64::NEG_INFINITY;
        };
        let n = p.n as f64;
        let shape = 0.5 * (n + p.v0);
        -0.5 * n * (2.0 * PI).ln() - w.len() as f64 * (1.0 + p.delta2).ln()
            + 0.5 * p.v0 * (0.5 * p.gamma0).ln()
            + ln_gamma(shape)
            - ln_gamma(0.5 * p.v0)
            - shape * (0.5 * (p.gamma0 + q)).ln()
    }

    fn sample_frequencies<R: Rng + ?Sized>(&self, rng: &mut R, k: usize) -> Vec<f64> {
        loop {
            let w: Vec<f64> = (0..k).map(|_| open_unit(rng) * PI).collect();
            // Nearly coincident frequencies make D'D singular; redraw.
            if k == 0 || gram_ok(self.params.n, &w) {
                return w;
            }
        }
    }

    /// `k`, the number of sinusoids.
    pub fn k_function(&self) -> TestFunction<Self> {
        TestFunction::discrete("k", |s: &SinusoidState, _y: &Vec<f64>| s.k() as f64)
    }

    /// First frequency, `NaN` when `k = 0`.
    pub fn first_frequency_function(&self) -> TestFunction<Self> {
        TestFunction::continuous("w1", |s: &SinusoidState, _y: &Vec<f64>| {
            s.w.first().copied().unwrap_or(f64::NAN)
        })
    }
}

fn gram_ok(n: usize, w: &[f64]) -> bool {
    let m = 2 * w.len();
    let mut g = gram_matrix(&design_matrix(n, w), n, m);
    cholesky_in_place(&mut g, m)
}

/// Uniform draw on the open interval `(0, 1)`.
pub(crate) fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

impl GenerativeModel for SinusoidModel {
    type Param = SinusoidState;
    type Data = Vec<f64>;

    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R) -> SinusoidState {
        let k = categorical_unchecked(rng, &self.pmf, 1.0);
        SinusoidState::new(self.sample_frequencies(rng, k))
    }

    fn sample_data<R: Rng + ?Sized>(&self, rng: &mut R, theta: &SinusoidState) -> Vec<f64> {
        let p = &self.params;
        let n = p.n;
        let sigma2 = sample_inverse_gamma(rng, 0.5 * p.v0, 0.5 * p.gamma0).expect("positive prior parameters");
        let sigma = sigma2.sqrt();
        let mut y: Vec<f64> = (0..n).map(|_| sigma * standard_normal(rng)).collect();
        let k = theta.k();
        if k > 0 {
            let m = 2 * k;
            let d = design_matrix(n, &theta.w);
            let mut g = gram_matrix(&d, n, m);
            let ok = cholesky_in_place(&mut g, m);
            debug_assert!(ok, "prior draws have a well-conditioned design");
            // a = delta sigma L^{-T} z has covariance delta^2 sigma^2 (D'D)^{-1}.
            let mut a: Vec<f64> = (0..m).map(|_| standard_normal(rng)).collect();
            backward_substitute_transpose(&g, m, &mut a);
            let scale = p.delta2.sqrt() * sigma;
            for (col, coef) in a.iter().enumerate() {
                for t in 0..n {
                    y[t] += scale * coef * d[col * n + t];
                }
            }
        }
        y
    }

    fn log_prior(&self, theta: &SinusoidState) -> Option<f64> {
        let pk = self.pmf.get(theta.k()).copied().unwrap_or(0.0);
        Some(pk.ln() - theta.k() as f64 * PI.ln())
    }

    fn log_likelihood(&self, theta: &SinusoidState, y: &Vec<f64>) -> Option<f64> {
        Some(self.log_marginal_likelihood(y, &theta.w))
    }

    fn param_space(&self) -> ParamSpace {
        let mut kinds = vec![ValueKind::Discrete];
        kinds.extend(std::iter::repeat(ValueKind::Continuous).take(self.params.k_max));
        ParamSpace {
            dimension: 1 + self.params.k_max,
            kinds,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_substream;

    #[test]
    fn default_sizes() {
        let p = SinusoidParams::default();
        assert_eq!(p.k_max, 31);
        assert_eq!(p.n_pad, 256);
        p.validate().unwrap();
    }

    #[test]
    fn accelerated_reference_values() {
        let p = accelerated_poisson_pmf(3.0, 3).unwrap();
        let expected = [0.142857, 0.428571, 0.321429, 0.107143];
        for (a, b) in p.iter().zip(expected) {
            assert!((a - b).abs() < 1e-6);
        }
        assert_eq!(accelerated_poisson_pmf(3.0, 0).unwrap(), vec![1.0]);
    }

    #[test]
    fn accelerated_dominated_by_poisson() {
        let acc = accelerated_poisson_pmf(3.0, 31).unwrap();
        let poi = truncated_poisson_pmf(3.0, 31).unwrap();
        let (mut ca, mut cp) = (0.0, 0.0);
        for l in 0..31 {
            ca += acc[l];
            cp += poi[l];
            assert!(ca >= cp - 1e-15, "cdf at {l}");
        }
        assert!((poi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn target_at_zero_order() {
        let m = SinusoidModel::new(SinusoidParams::with_length(6)).unwrap();
        let y = vec![0.5, -1.0, 2.0, 0.0, 1.5, -0.5];
        let yty: f64 = y.iter().map(|v| v * v).sum();
        let expected = -0.5 * 16.0 * (10.0 + yty).ln() + m.prior_pmf()[0].ln();
        assert!((m.target_log_density(&y, &SinusoidState::new(vec![])) - expected).abs() < 1e-12);
    }

    #[test]
    fn prior_draws_are_valid() {
        let m = SinusoidModel::new(SinusoidParams::default()).unwrap();
        let mut rng = derive_substream(8, 0).rng();
        for _ in 0..200 {
            let s = m.sample_prior(&mut rng);
            assert!(s.is_valid(31));
            let y = m.sample_data(&mut rng, &s);
            assert_eq!(y.len(), 64);
            assert!(y.iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn pure_noise_variance() {
        // With k = 0, E[y_t^2] = E[sigma^2] = (gamma0 / 2) / (v0 / 2 - 1) = 1.25.
        let m = SinusoidModel::new(SinusoidParams::default().with_prior(KPrior::Fixed(0))).unwrap();
        let mut rng = derive_substream(9, 0).rng();
        let reps = 10_000;
        let per: Vec<f64> = (0..reps)
            .map(|_| {
                let s = m.sample_prior(&mut rng);
                let y = m.sample_data(&mut rng, &s);
                y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64
            })
            .collect();
        let mean = per.iter().sum::<f64>() / reps as f64;
        let sd = (per.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt();
        assert!((mean - 1.25).abs() < 3.0 * sd / (reps as f64).sqrt(), "mean {mean}");
    }
}
