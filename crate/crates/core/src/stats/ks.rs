use crate::error::{invalid, Result};

use super::TestOutcome;

const MAX_TERMS: usize = 200;

/// Upper tail of the Kolmogorov distribution, `P(K > lambda)`.
///
/// For `lambda >= 1` the alternating series `2 sum (-1)^(j-1) exp(-2 j^2 lambda^2)`
/// converges in a handful of terms. Below that the Jacobi-transformed series
/// for the CDF, `sqrt(2 pi)/lambda sum exp(-(2j-1)^2 pi^2 / (8 lambda^2))`, is
/// used instead. Both stop once a term no longer moves the sum.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    if lambda < 1.0 {
        jacobi_sf(lambda)
    } else {
        alternating_sf(lambda)
    }
}

fn jacobi_sf(lambda: f64) -> f64 {
    let scale = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
    let mut cdf = 0.0;
    for j in 1..=MAX_TERMS {
        let odd = (2 * j - 1) as f64;
        let term = (-odd * odd * scale).exp();
        cdf += term;
        if term <= 1e-16 * cdf || term < 1e-300 {
            break;
        }
    }
    cdf *= (2.0 * std::f64::consts::PI).sqrt() / lambda;
    (1.0 - cdf).clamp(0.0, 1.0)
}

fn alternating_sf(lambda: f64) -> f64 {
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=MAX_TERMS {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * lambda * lambda).exp();
        sum += sign * term;
        if term <= 1e-16 * sum.abs() || term < 1e-300 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn sorted_finite(x: &[f64], what: &str) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(invalid(format!("{what} sample is empty")));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(invalid(format!("{what} sample contains a non-finite value")));
    }
    let mut v = x.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    Ok(v)
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value at
/// `sqrt(n m / (n + m)) * D`.
///
/// Tied values are consumed together before the ECDF gap is measured, so `D`
/// is the exact sup distance even with ties.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> Result<TestOutcome> {
    let xs = sorted_finite(x, "first")?;
    let ys = sorted_finite(y, "second")?;
    let (n, m) = (xs.len(), ys.len());
    let (nf, mf) = (n as f64, m as f64);

    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let v = if xs[i] <= ys[j] { xs[i] } else { ys[j] };
        while i < n && xs[i] == v {
            i += 1;
        }
        while j < m && ys[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / nf - j as f64 / mf).abs());
    }
    // Once one sample is exhausted the gap only shrinks towards zero.
    let lambda = (nf * mf / (nf + mf)).sqrt() * d;
    Ok(TestOutcome::new(d, kolmogorov_sf(lambda), n + m))
}

/// One-sample KS test of `x` against a continuous CDF.
pub fn ks_one_sample(x: &[f64], cdf: impl Fn(f64) -> f64) -> Result<TestOutcome> {
    let u: Vec<f64> = x.iter().map(|v| cdf(*v)).collect();
    if u.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(invalid("cdf returned a value outside [0, 1]"));
    }
    ks_one_sample_uniform01(&u)
}

/// One-sample KS distance of `x` to the U(0,1) CDF.
pub fn ks_one_sample_uniform01(x: &[f64]) -> Result<TestOutcome> {
    let xs = sorted_finite(x, "input")?;
    if let Some(bad) = xs.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(invalid(format!("value {bad} outside [0, 1]")));
    }
    let nf = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let above = (i + 1) as f64 / nf - v;
            let below = v - i as f64 / nf;
            above.max(below)
        })
        .fold(0.0, f64::max);
    Ok(TestOutcome::new(d, kolmogorov_sf(nf.sqrt() * d), xs.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples() {
        let r = ks_two_sample(&[0.1, 0.2, 0.3], &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn disjoint_supports() {
        let r = ks_two_sample(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(r.statistic, 1.0);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(ks_two_sample(&[], &[1.0]).is_err());
        assert!(ks_two_sample(&[1.0], &[]).is_err());
        assert!(ks_two_sample(&[f64::NAN], &[1.0]).is_err());
    }

    #[test]
    fn uniform_grid_is_close() {
        let x: Vec<f64> = (1..=1000).map(|k| k as f64 / 1000.0).collect();
        let r = ks_one_sample_uniform01(&x).unwrap();
        assert!(r.statistic <= 0.001 + 1e-15, "{}", r.statistic);
    }

    #[test]
    fn point_mass_at_zero() {
        let r = ks_one_sample_uniform01(&[0.0; 100]).unwrap();
        assert_eq!(r.statistic, 1.0);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(ks_one_sample_uniform01(&[0.5, 1.5]).is_err());
        assert!(ks_one_sample_uniform01(&[-0.1]).is_err());
    }

    #[test]
    fn series_branches_agree_at_switch() {
        for lambda in [0.8, 0.9, 1.0, 1.1, 1.3] {
            let a = jacobi_sf(lambda);
            let b = alternating_sf(lambda);
            assert!((a - b).abs() < 1e-14, "{lambda}: {a} vs {b}");
        }
    }

    #[test]
    fn known_kolmogorov_quantiles() {
        // Classical critical values of the Kolmogorov distribution.
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_sf(1.6276) - 0.01).abs() < 1e-4);
        assert!((kolmogorov_sf(1.2238) - 0.10).abs() < 1e-4);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
        assert!(kolmogorov_sf(0.05) > 1.0 - 1e-12);
    }

    #[test]
    fn p_value_monotone_in_lambda() {
        let mut prev = 1.0;
        for i in 1..400 {
            let p = kolmogorov_sf(i as f64 * 0.01);
            assert!(p <= prev + 1e-15);
            prev = p;
        }
    }
}
