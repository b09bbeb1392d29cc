use mcverify::sequential::{expected_extra_effort_uniform, extra_effort_bound, matched_initial_size, thresholds};
use mcverify::parallel::replicate;
use mcverify::{sequential_test, PValueVector, RngStream, SequentialConfig, Verdict};
use proptest::prelude::*;
use rand::Rng;

fn source(transform: fn(f64) -> f64) -> impl FnMut(usize, RngStream) -> mcverify::Result<PValueVector> {
    move |n, s| Ok(PValueVector::new(vec!["p".into()], vec![transform(s.rng().random())], n, n as u64))
}

#[test]
fn default_thresholds() {
    let t = thresholds(1e-5, 7).unwrap();
    assert!((t.gamma - 0.1462).abs() < 1e-3);
    let expected = [1.4e-6, 9.8e-6, 6.6e-5, 4.6e-4, 3.1e-3, 2.1e-2];
    for (b, e) in t.betas.iter().zip(expected) {
        assert!((b / e - 1.0).abs() < 0.05, "{b} vs {e}");
    }
    assert!((expected_extra_effort_uniform(7, 4.0, t.gamma) - 0.685).abs() < 0.002);
    assert!((extra_effort_bound(7, 1.0, t.gamma, &t.betas) - 0.171).abs() < 0.002);
}

#[test]
fn super_uniform_p_values_fail_less_often() {
    // max of two uniforms is super-uniform: P(p <= q) = q^2.
    let config = SequentialConfig::new(0.05, 5, 2.0, 10).unwrap();
    let fails = replicate(20_000, RngStream::new(5), |s| {
        let mut src = source(|u| u.sqrt());
        Ok(sequential_test(&mut src, &config, s)?.failed())
    })
    .unwrap();
    let rate = fails.iter().filter(|f| **f).count() as f64 / fails.len() as f64;
    assert!(rate <= 0.05, "{rate}");
}

#[test]
fn sub_uniform_p_values_are_caught() {
    let config = SequentialConfig::new(0.01, 3, 2.0, 10).unwrap();
    let v = sequential_test(&mut source(|u| u * 1e-6), &config, RngStream::new(1)).unwrap();
    assert_eq!(v.verdict, Verdict::Fail);
    assert_eq!(v.iterations_run(), 1);
}

#[test]
fn sample_size_grows_once() {
    let config = SequentialConfig::new(0.5, 6, 3.0, 7).unwrap();
    assert_eq!(config.size_at(1), 7);
    for i in 2..=6 {
        assert_eq!(config.size_at(i), 21);
    }
    let v = sequential_test(&mut source(|_| 0.4), &config, RngStream::new(1)).unwrap();
    let sizes: Vec<usize> = v.iterations.iter().map(|r| r.sample_size).collect();
    assert!(sizes[0] == 7 && sizes[1..].iter().all(|&n| n == 21), "{sizes:?}");
}

#[test]
fn rejects_bad_configs() {
    assert!(SequentialConfig::new(0.0, 3, 2.0, 10).is_err());
    assert!(SequentialConfig::new(0.01, 0, 2.0, 10).is_err());
    assert!(SequentialConfig::new(0.01, 3, 0.5, 10).is_err());
    assert!(SequentialConfig::new(0.01, 3, 2.0, 0).is_err());
}

proptest! {
    #[test]
    fn threshold_structure(alpha in 1e-8f64..0.2, k in 1usize..15) {
        let t = thresholds(alpha, k).unwrap();
        prop_assert!((t.betas[0] - alpha / k as f64).abs() < 1e-15);
        prop_assert!((t.betas[k - 1] - t.gamma).abs() <= 1e-12);
        for w in t.betas.windows(2) {
            prop_assert!(w[1] >= w[0]);
            prop_assert!((w[1] * t.gamma / w[0] - 1.0).abs() < 1e-9);
        }
        // Failure probability for exactly uniform one-dimensional p-values.
        let p_fail: f64 = t.betas.iter().enumerate().map(|(i, b)| b * t.gamma.powi(i as i32)).sum();
        prop_assert!(p_fail <= alpha * (1.0 + 1e-9));
    }

    #[test]
    fn effort_bound_dominates_uniform_effort(alpha in 1e-8f64..0.1, k in 1usize..12, delta in 1.0f64..5.0) {
        let t = thresholds(alpha, k).unwrap();
        prop_assume!(t.gamma + t.betas[0] < 1.0);
        let exact = expected_extra_effort_uniform(k, delta, t.gamma);
        let bound = extra_effort_bound(k, delta, t.gamma, &t.betas);
        prop_assert!(bound >= exact - 1e-12);
    }

    #[test]
    fn matched_size_never_exceeds_single(n in 1usize..100_000, k in 1usize..10, delta in 1.0f64..4.0) {
        let m = matched_initial_size(n, 1e-5, k, delta).unwrap();
        prop_assert!(m >= 1 && m <= n);
    }

    #[test]
    fn verdict_records_are_consistent(seed in any::<u64>()) {
        let config = SequentialConfig::new(0.2, 4, 2.0, 5).unwrap();
        let v = sequential_test(&mut source(|u| u), &config, RngStream::new(seed)).unwrap();
        prop_assert!(v.iterations_run() >= 1 && v.iterations_run() <= 4);
        prop_assert_eq!(v.effort, v.iterations.iter().map(|r| r.effort).sum::<u64>());
        let last = v.iterations.last().unwrap();
        prop_assert_eq!(v.failed(), last.q <= last.beta);
    }
}
