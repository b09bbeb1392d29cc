//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use mcverify::model::TieBreak;
use mcverify::models::toy::{DiscreteModel, MatrixKernel};
use nalgebra::{DMatrix, DVector};

pub fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

pub fn mat_pow(a: &[Vec<f64>], p: usize) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect();
    for _ in 0..p {
        out = mat_mul(&out, a);
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, (n - 1) as u32);
            out.push(q);
        }
    }
    out
}

/// Exact law of the rank statistic on a finite model, by summing over the
/// data, the pivot position, the pivot state, every chain path and every
/// tie-break permutation. The chain is extended in both directions from the
/// pivot with the forward kernel raised to `thinning`.
pub fn exact_rank_distribution(model: &DiscreteModel, kernel: &MatrixKernel, chain_length: usize, thinning: usize) -> Vec<f64> {
    let s = model.n_states();
    let perms = permutations(chain_length);
    let perm_weight = 1.0 / perms.len() as f64;
    let ties: Vec<TieBreak> = perms.into_iter().map(|p| TieBreak::from_keys(p).unwrap()).collect();
    let mut dist = vec![0.0; chain_length];
    let total_paths = s.pow(chain_length as u32);
    for y in 0..model.n_data() {
        let step = mat_pow(kernel.transition_matrix(y), thinning);
        for pivot in 0..chain_length {
            for code in 0..total_paths {
                let mut states = vec![0usize; chain_length];
                let mut c = code;
                for st in states.iter_mut() {
                    *st = c % s;
                    c /= s;
                }
                let theta = states[pivot];
                let mut p = model.prior()[theta] * model.likelihood(theta, y) / chain_length as f64;
                for i in pivot + 1..chain_length {
                    p *= step[states[i - 1]][states[i]];
                }
                for i in (0..pivot).rev() {
                    p *= step[states[i + 1]][states[i]];
                }
                if p == 0.0 {
                    continue;
                }
                let scores: Vec<f64> = states.iter().map(|&v| v as f64).collect();
                for tie in &ties {
                    dist[tie.rank(&scores, pivot) - 1] += p * perm_weight;
                }
            }
        }
    }
    dist
}

/// Largest gap between the law of `(theta_L, y)` after `steps` kernel steps
/// from a joint draw and the joint itself.
pub fn fitted_vs_direct_gap(model: &DiscreteModel, kernel: &MatrixKernel, steps: usize) -> f64 {
    let s = model.n_states();
    let mut gap: f64 = 0.0;
    for y in 0..model.n_data() {
        let k = mat_pow(kernel.transition_matrix(y), steps);
        for j in 0..s {
            let fitted: f64 = (0..s).map(|i| model.prior()[i] * model.likelihood(i, y) * k[i][j]).sum();
            let direct = model.prior()[j] * model.likelihood(j, y);
            gap = gap.max((fitted - direct).abs());
        }
    }
    gap
}

pub fn dense_design(n: usize, w: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(n, 2 * w.len(), |t, c| {
        let x = w[c / 2] * t as f64;
        if c % 2 == 0 {
            x.cos()
        } else {
            x.sin()
        }
    })
}

/// `y' P y` with `P = I - delta2 / (1 + delta2) D (D'D)^-1 D'`, by dense inverse.
pub fn dense_quad_form(y: &[f64], w: &[f64], delta2: f64) -> f64 {
    let n = y.len();
    let yv = DVector::from_column_slice(y);
    if w.is_empty() {
        return yv.dot(&yv);
    }
    let d = dense_design(n, w);
    let gram_inv = (d.transpose() * &d).try_inverse().expect("invertible Gram matrix");
    let proj = &d * gram_inv * d.transpose();
    let p = DMatrix::identity(n, n) - proj * (delta2 / (1.0 + delta2));
    (yv.transpose() * p * &yv)[(0, 0)]
}

/// `log p(y | w)` with the amplitudes integrated analytically (a Gaussian
/// with covariance `sigma2 (I + delta2 D (D'D)^-1 D')`) and the noise
/// variance integrated numerically against its inverse-gamma prior.
pub fn conjugate_log_evidence(y: &[f64], w: &[f64], delta2: f64, v0: f64, gamma0: f64) -> f64 {
    let n = y.len();
    let yv = DVector::from_column_slice(y);
    let mut c = DMatrix::<f64>::identity(n, n);
    if !w.is_empty() {
        let d = dense_design(n, w);
        let gram_inv = (d.transpose() * &d).try_inverse().expect("invertible Gram matrix");
        c += &d * gram_inv * d.transpose() * delta2;
    }
    let chol = c.clone().cholesky().expect("positive definite covariance");
    let log_det: f64 = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    let quad = (yv.transpose() * chol.inverse() * &yv)[(0, 0)];

    let a = 0.5 * v0;
    let b = 0.5 * gamma0;
    let ln_gamma_a = statrs::function::gamma::ln_gamma(a);
    // Integrate over t = ln sigma2 with the composite Simpson rule.
    let integrand = |t: f64| -> f64 {
        let s2 = t.exp();
        let log_normal = -0.5 * n as f64 * (2.0 * std::f64::consts::PI * s2).ln() - 0.5 * log_det - 0.5 * quad / s2;
        let log_ig = a * b.ln() - ln_gamma_a - (a + 1.0) * t - b / s2;
        log_normal + log_ig + t
    };
    let (lo, hi, m) = (-12.0, 12.0, 40_000usize);
    let h = (hi - lo) / m as f64;
    let vals: Vec<f64> = (0..=m).map(|i| integrand(lo + i as f64 * h)).collect();
    let top = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut acc = 0.0;
    for (i, v) in vals.iter().enumerate() {
        let wgt = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += wgt * (v - top).exp();
    }
    top + (acc * h / 3.0).ln()
}
