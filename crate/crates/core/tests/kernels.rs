//! Numerical detailed balance of the frequency kernels, and reversibility
//! declarations of the shipped samplers.

use std::f64::consts::PI;

use mcverify::models::gaussian::{gibbs_kernel, GaussianModel, GaussianParams, GibbsVariant, Scan};
use mcverify::models::sinusoid::{GfkProposal, KPrior, MoveSet, RatioVariant, RjKernel, SinusoidModel, SinusoidParams, SinusoidState};
use mcverify::{GenerativeModel, KernelFamily, RngStream};

fn data(prior: KPrior, seed: u64) -> (SinusoidModel, Vec<f64>) {
    let model = SinusoidModel::new(SinusoidParams::default().with_prior(prior)).unwrap();
    let mut rng = RngStream::new(seed).rng();
    let w = model.sample_prior(&mut rng);
    let y = model.sample_data(&mut rng, &w);
    (model, y)
}

fn grid(m: usize) -> Vec<f64> {
    (0..m).map(|i| (i as f64 + 0.5) * PI / m as f64).collect()
}

/// Largest relative gap between `pi(a) K(a, b)` and `pi(b) K(b, a)` over
/// all off-diagonal grid pairs, computed in logs. `log_k(a, b)` is the log
/// proposal density plus the log acceptance probability.
fn balance_residual(log_target: impl Fn(f64) -> f64, log_k: impl Fn(f64, f64) -> f64, points: &[f64]) -> f64 {
    let logs: Vec<f64> = points.iter().map(|&w| log_target(w)).collect();
    let mut worst: f64 = 0.0;
    for (i, &a) in points.iter().enumerate() {
        for (j, &b) in points.iter().enumerate() {
            let (fwd, bwd) = (logs[i] + log_k(a, b), logs[j] + log_k(b, a));
            if i == j || (fwd == f64::NEG_INFINITY && bwd == f64::NEG_INFINITY) {
                continue;
            }
            worst = worst.max((fwd - bwd).abs().exp_m1());
        }
    }
    worst
}

#[test]
fn local_kernel_detailed_balance_on_grid() {
    let (model, y) = data(KPrior::Fixed(1), 2);
    let kernel = RjKernel::new(&model, RatioVariant::Corrected, MoveSet::Local).unwrap();
    let sigma = model.params().sigma_rw;
    let target = |w: f64| model.target_log_density(&y, &SinusoidState::new(vec![w]));
    let k = |a: f64, b: f64| {
        -0.5 * ((b - a) / sigma).powi(2) + kernel.lfk_acceptance(&y, &SinusoidState::new(vec![a]), 0, b).ln()
    };
    assert!(balance_residual(target, k, &grid(400)) <= 1e-8);
}

#[test]
fn global_kernel_detailed_balance_on_grid() {
    for seed in [2, 5] {
        let (model, y) = data(KPrior::Fixed(1), seed);
        let kernel = RjKernel::new(&model, RatioVariant::Corrected, MoveSet::Global).unwrap();
        let cache = kernel.prepare(&y);
        let target = |w: f64| model.target_log_density(&y, &SinusoidState::new(vec![w]));
        let k = |a: f64, b: f64| {
            cache.proposal.density(b).ln() + kernel.gfk_acceptance(&y, &cache, &SinusoidState::new(vec![a]), 0, b).ln()
        };
        assert!(balance_residual(target, k, &grid(300)) <= 1e-8);
    }
}

#[test]
fn global_kernel_second_component_balance() {
    let (model, y) = data(KPrior::Fixed(2), 3);
    let kernel = RjKernel::new(&model, RatioVariant::Corrected, MoveSet::Global).unwrap();
    let cache = kernel.prepare(&y);
    let other = 1.234;
    let target = |w: f64| model.target_log_density(&y, &SinusoidState::new(vec![other, w]));
    let k = |a: f64, b: f64| {
        cache.proposal.density(b).ln() + kernel.gfk_acceptance(&y, &cache, &SinusoidState::new(vec![other, a]), 1, b).ln()
    };
    assert!(balance_residual(target, k, &grid(200)) <= 1e-8);
}

#[test]
fn proposal_density_integrates_to_one() {
    let (_, y) = data(KPrior::TruncatedPoisson, 4);
    let p = GfkProposal::new(&y, 256);
    let m = 256 * 64;
    let h = PI / m as f64;
    let total: f64 = (0..m).map(|i| p.density((i as f64 + 0.5) * h) * h).sum();
    assert!((total - 1.0).abs() < 1e-6, "{total}");
}

#[test]
fn reversibility_declarations() {
    let _ = GaussianModel::new(GaussianParams::default()).unwrap();
    let random = gibbs_kernel(GibbsVariant::correct(Scan::Random)).unwrap();
    let systematic = gibbs_kernel(GibbsVariant::correct(Scan::Systematic)).unwrap();
    assert!(KernelFamily::<GaussianModel>::declared_reversible(&random));
    assert!(!KernelFamily::<GaussianModel>::declared_reversible(&systematic));
    let (model, _) = data(KPrior::TruncatedPoisson, 1);
    let rj = RjKernel::new(&model, RatioVariant::Erroneous, MoveSet::ReversibleJump).unwrap();
    assert!(rj.declared_reversible());
}

#[test]
fn rj_chain_stays_in_support() {
    let (model, y) = data(KPrior::TruncatedPoisson, 6);
    let kernel = RjKernel::new(&model, RatioVariant::Corrected, MoveSet::ReversibleJump).unwrap();
    let cache = kernel.prepare(&y);
    let mut rng = RngStream::new(9).rng();
    let mut state = SinusoidState::new(vec![]);
    for _ in 0..5000 {
        state = kernel.step(&mut rng, &y, &cache, &state).unwrap();
        assert!(state.is_valid(model.params().k_max));
        assert!(model.target_log_density(&y, &state).is_finite());
    }
}

#[test]
fn move_probabilities() {
    let (model, _) = data(KPrior::TruncatedPoisson, 1);
    let kernel = RjKernel::new(&model, RatioVariant::Corrected, MoveSet::ReversibleJump).unwrap();
    let k_max = model.params().k_max;
    assert_eq!(kernel.death_probability(0), 0.0);
    assert_eq!(kernel.birth_probability(k_max), 0.0);
    for k in 0..k_max {
        let b = kernel.birth_probability(k);
        let d = kernel.death_probability(k + 1);
        assert!(b > 0.0 && b <= 0.25 && d > 0.0 && d <= 0.25);
        assert!(b + kernel.death_probability(k) <= 0.5 + 1e-15);
    }
}
