//! Finite-state models whose kernels are explicit transition matrices.
//!
//! Small enough to enumerate every outcome of a test exactly, which makes
//! them the ground truth for the exactness properties of both tests.

use rand::Rng;

use crate::dist::categorical_unchecked;
use crate::error::{invalid, Result};
use crate::model::{GenerativeModel, KernelFamily, ParamSpace, TestFunction, ValueKind};

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteModel {
    prior: Vec<f64>,
    /// `likelihood[theta][y]`.
    likelihood: Vec<Vec<f64>>,
}

fn check_pmf(p: &[f64], what: &str) -> Result<()> {
    if p.is_empty() || p.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(invalid(format!("{what} must be a non-empty nonnegative vector")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("{what} must sum to one, got {total}")));
    }
    Ok(())
}

impl DiscreteModel {
    pub fn new(prior: Vec<f64>, likelihood: Vec<Vec<f64>>) -> Result<Self> {
        check_pmf(&prior, "prior")?;
        if likelihood.len() != prior.len() {
            return Err(invalid("likelihood needs one row per parameter value"));
        }
        let n_data = likelihood[0].len();
        for row in &likelihood {
            if row.len() != n_data {
                return Err(invalid("likelihood rows must have equal length"));
            }
            check_pmf(row, "likelihood row")?;
        }
        Ok(DiscreteModel { prior, likelihood })
    }

    /// Three parameter values and two data values, with an informative
    /// likelihood.
    pub fn three_state() -> Self {
        DiscreteModel::new(
            vec![0.2, 0.5, 0.3],
            vec![vec![0.7, 0.3], vec![0.4, 0.6], vec![0.1, 0.9]],
        )
        .expect("valid toy model")
    }

    pub fn n_states(&self) -> usize {
        self.prior.len()
    }

    pub fn n_data(&self) -> usize {
        self.likelihood[0].len()
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn likelihood(&self, theta: usize, y: usize) -> f64 {
        self.likelihood[theta][y]
    }

    pub fn marginal(&self, y: usize) -> f64 {
        (0..self.n_states()).map(|t| self.prior[t] * self.likelihood[t][y]).sum()
    }

    pub fn posterior(&self, y: usize) -> Vec<f64> {
        let m = self.marginal(y);
        (0..self.n_states())
            .map(|t| self.prior[t] * self.likelihood[t][y] / m)
            .collect()
    }

    /// The value of the parameter itself, treated as discrete.
    pub fn identity_function(&self) -> TestFunction<Self> {
        TestFunction::discrete("theta", |t: &usize, _y: &usize| *t as f64)
    }
}

impl GenerativeModel for DiscreteModel {
    type Param = usize;
    type Data = usize;

    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        categorical_unchecked(rng, &self.prior, 1.0)
    }

    fn sample_data<R: Rng + ?Sized>(&self, rng: &mut R, theta: &usize) -> usize {
        categorical_unchecked(rng, &self.likelihood[*theta], 1.0)
    }

    fn log_prior(&self, theta: &usize) -> Option<f64> {
        Some(self.prior[*theta].ln())
    }

    fn log_likelihood(&self, theta: &usize, y: &usize) -> Option<f64> {
        Some(self.likelihood[*theta][*y].ln())
    }

    fn param_space(&self) -> ParamSpace {
        ParamSpace {
            dimension: 1,
            kinds: vec![ValueKind::Discrete],
        }
    }
}

/// A kernel family given by one row-stochastic matrix per data value.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixKernel {
    matrices: Vec<Vec<Vec<f64>>>,
    reversible: bool,
}

impl MatrixKernel {
    pub fn new(matrices: Vec<Vec<Vec<f64>>>, reversible: bool) -> Result<Self> {
        for m in &matrices {
            for row in m {
                if row.len() != m.len() {
                    return Err(invalid("transition matrices must be square"));
                }
                check_pmf(row, "transition row")?;
            }
        }
        Ok(MatrixKernel { matrices, reversible })
    }

    /// Metropolis kernels that propose any other state uniformly.
    pub fn metropolis(model: &DiscreteModel) -> Self {
        let matrices = (0..model.n_data())
            .map(|y| metropolis_matrix(&model.posterior(y)))
            .collect();
        MatrixKernel {
            matrices,
            reversible: true,
        }
    }

    /// `(1 - eps) I + eps C` with `C` the cyclic shift. It leaves the uniform
    /// distribution invariant but is not reversible for `0 < eps < 1`.
    pub fn lazy_cycle(n_states: usize, n_data: usize, eps: f64) -> Self {
        let mut m = vec![vec![0.0; n_states]; n_states];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += 1.0 - eps;
            row[(i + 1) % n_states] += eps;
        }
        MatrixKernel {
            matrices: vec![m; n_data],
            reversible: false,
        }
    }

    pub fn transition_matrix(&self, y: usize) -> &[Vec<f64>] {
        &self.matrices[y]
    }
}

/// Metropolis transition matrix for `target` with a uniform proposal over the
/// other states.
pub fn metropolis_matrix(target: &[f64]) -> Vec<Vec<f64>> {
    let n = target.len();
    let q = if n > 1 { 1.0 / (n - 1) as f64 } else { 0.0 };
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut stay = 1.0;
        for j in 0..n {
            if i != j {
                let a = if target[i] > 0.0 { (target[j] / target[i]).min(1.0) } else { 1.0 };
                m[i][j] = q * a;
                stay -= m[i][j];
            }
        }
        m[i][i] = stay;
    }
    m
}

impl KernelFamily<DiscreteModel> for MatrixKernel {
    type Cache = ();

    fn prepare(&self, _y: &usize) {}

    fn step<R: Rng + ?Sized>(&self, rng: &mut R, y: &usize, _cache: &(), theta: &usize) -> Result<usize> {
        let row = &self.matrices[*y][*theta];
        Ok(categorical_unchecked(rng, row, 1.0))
    }

    fn declared_reversible(&self) -> bool {
        self.reversible
    }
}
