//! Design matrix `D(w)` and the projected quadratic form `y' P_k y`.

use crate::error::{Error, Result};

/// Relative pivot floor below which a Gram matrix is treated as singular.
const PIVOT_FLOOR: f64 = 1e-10;

/// `N x 2k` design matrix, stored column-major: columns `cos(w_l t)` and
/// `sin(w_l t)` for `t = 0..N`.
pub fn design_matrix(n: usize, w: &[f64]) -> Vec<f64> {
    let mut d = vec![0.0; n * 2 * w.len()];
    for (l, &wl) in w.iter().enumerate() {
        let (cos_col, rest) = d[2 * l * n..(2 * l + 2) * n].split_at_mut(n);
        for t in 0..n {
            let (s, c) = (wl * t as f64).sin_cos();
            cos_col[t] = c;
            rest[t] = s;
        }
    }
    d
}

/// Row-major `m x m` Gram matrix of a column-major `n x m` matrix.
pub fn gram_matrix(design: &[f64], n: usize, m: usize) -> Vec<f64> {
    let mut gram = vec![0.0; m * m];
    for a in 0..m {
        let ca = &design[a * n..(a + 1) * n];
        for b in 0..=a {
            let cb = &design[b * n..(b + 1) * n];
            let s: f64 = ca.iter().zip(cb).map(|(x, z)| x * z).sum();
            gram[a * m + b] = s;
            gram[b * m + a] = s;
        }
    }
    gram
}

/// In-place lower Cholesky factor of a row-major `m x m` matrix. Returns
/// `false` when a pivot falls below `PIVOT_FLOOR` times the largest diagonal
/// entry.
pub fn cholesky_in_place(a: &mut [f64], m: usize) -> bool {
    let scale = (0..m).map(|i| a[i * m + i]).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return m == 0;
    }
    for j in 0..m {
        let mut d = a[j * m + j];
        for p in 0..j {
            d -= a[j * m + p] * a[j * m + p];
        }
        if !(d > PIVOT_FLOOR * scale) {
            return false;
        }
        let d = d.sqrt();
        a[j * m + j] = d;
        for i in j + 1..m {
            let mut s = a[i * m + j];
            for p in 0..j {
                s -= a[i * m + p] * a[j * m + p];
            }
            a[i * m + j] = s / d;
        }
        for p in j + 1..m {
            a[j * m + p] = 0.0;
        }
    }
    true
}

/// Solves `L x = b` for lower-triangular row-major `L`.
pub fn forward_substitute(l: &[f64], m: usize, b: &mut [f64]) {
    for i in 0..m {
        let mut s = b[i];
        for p in 0..i {
            s -= l[i * m + p] * b[p];
        }
        b[i] = s / l[i * m + i];
    }
}

/// Solves `L' x = b` for lower-triangular row-major `L`.
pub fn backward_substitute_transpose(l: &[f64], m: usize, b: &mut [f64]) {
    for i in (0..m).rev() {
        let mut s = b[i];
        for p in i + 1..m {
            s -= l[p * m + i] * b[p];
        }
        b[i] = s / l[i * m + i];
    }
}

/// Everything derived from one frequency vector and one signal.
#[derive(Clone, Debug)]
pub struct DesignMatrixWorkspace {
    pub n: usize,
    pub k: usize,
    /// Column-major `N x 2k`.
    pub design: Vec<f64>,
    /// Row-major `2k x 2k` Gram matrix `D'D`.
    pub gram: Vec<f64>,
    /// Lower Cholesky factor of `gram`, row-major.
    pub cholesky: Vec<f64>,
    /// `L^{-1} D' y`.
    pub whitened: Vec<f64>,
    pub yty: f64,
    pub quad_form: f64,
}

impl DesignMatrixWorkspace {
    /// Fails with [`Error::Kernel`] when the Gram matrix is numerically
    /// singular, which happens for nearly coincident frequencies or
    /// frequencies at the ends of `(0, pi)`.
    pub fn new(y: &[f64], w: &[f64], delta2: f64) -> Result<Self> {
        let n = y.len();
        let k = w.len();
        let m = 2 * k;
        let yty: f64 = y.iter().map(|v| v * v).sum();
        let design = design_matrix(n, w);
        let gram = gram_matrix(&design, n, m);
        let mut cholesky = gram.clone();
        if !cholesky_in_place(&mut cholesky, m) {
            return Err(Error::Kernel("singular design matrix".into()));
        }
        let mut whitened: Vec<f64> = (0..m)
            .map(|a| design[a * n..(a + 1) * n].iter().zip(y).map(|(x, v)| x * v).sum())
            .collect();
        forward_substitute(&cholesky, m, &mut whitened);
        let proj: f64 = whitened.iter().map(|v| v * v).sum();
        let quad_form = yty - delta2 / (1.0 + delta2) * proj;
        Ok(DesignMatrixWorkspace {
            n,
            k,
            design,
            gram,
            cholesky,
            whitened,
            yty,
            quad_form,
        })
    }
}

/// `y' P_k y`, or `None` for a singular design. `P_0 = I`.
pub fn quad_form_pk(y: &[f64], w: &[f64], delta2: f64) -> Option<f64> {
    if w.is_empty() {
        return Some(y.iter().map(|v| v * v).sum());
    }
    DesignMatrixWorkspace::new(y, w, delta2).ok().map(|ws| ws.quad_form)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_at_quarter_turn() {
        let d = design_matrix(4, &[std::f64::consts::FRAC_PI_2]);
        let expect_cos = [1.0, 0.0, -1.0, 0.0];
        let expect_sin = [0.0, 1.0, 0.0, -1.0];
        for t in 0..4 {
            assert!((d[t] - expect_cos[t]).abs() < 1e-15);
            assert!((d[4 + t] - expect_sin[t]).abs() < 1e-15);
        }
    }

    #[test]
    fn cholesky_reconstructs() {
        let y: Vec<f64> = (0..16).map(|t| (t as f64 * 0.37).sin() + 0.1 * t as f64).collect();
        let ws = DesignMatrixWorkspace::new(&y, &[0.4, 1.3, 2.9], 64.0).unwrap();
        let m = 6;
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                let s: f64 = (0..m).map(|p| ws.cholesky[i * m + p] * ws.cholesky[j * m + p]).sum();
                worst = worst.max((s - ws.gram[i * m + j]).abs() / ws.gram[i * m + i].abs());
            }
        }
        assert!(worst < 1e-8);
    }

    #[test]
    fn empty_frequency_vector() {
        let y = [1.0, 2.0, -1.0];
        assert_eq!(quad_form_pk(&y, &[], 64.0), Some(6.0));
    }

    #[test]
    fn vanishing_prior_scale() {
        let y: Vec<f64> = (0..8).map(|t| (t as f64).cos() + 0.3).collect();
        let yty: f64 = y.iter().map(|v| v * v).sum();
        let q = quad_form_pk(&y, &[1.0], 1e-12).unwrap();
        assert!(((q - yty) / yty).abs() < 1e-9);
    }

    #[test]
    fn coincident_frequencies_are_singular() {
        let y = vec![1.0; 16];
        assert!(quad_form_pk(&y, &[1.0, 1.0], 64.0).is_none());
    }

    #[test]
    fn substitution_round_trip() {
        let mut a = vec![4.0, 2.0, 2.0, 3.0];
        assert!(cholesky_in_place(&mut a, 2));
        let mut b = vec![1.0, 2.0];
        forward_substitute(&a, 2, &mut b);
        backward_substitute_transpose(&a, 2, &mut b);
        // b now solves [[4,2],[2,3]] x = [1,2].
        assert!((4.0 * b[0] + 2.0 * b[1] - 1.0).abs() < 1e-14);
        assert!((2.0 * b[0] + 3.0 * b[1] - 2.0).abs() < 1e-14);
    }
}
