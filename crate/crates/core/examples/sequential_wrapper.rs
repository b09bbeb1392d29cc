//! The sequential wrapper on its own: thresholds, expected effort, and its
//! behaviour on exactly uniform p-values versus a source with a small effect.

use mcverify::harness::tuning::ks_iid_batch;
use mcverify::sequential::{expected_extra_effort_uniform, extra_effort_bound, thresholds};
use mcverify::stats::kolmogorov_sf;
use mcverify::{sequential_test, PValueVector, RngStream, SequentialConfig};
use rand::Rng;

fn main() -> mcverify::Result<()> {
    let t = thresholds(1e-5, 7)?;
    println!("gamma = {:.4}", t.gamma);
    for (i, b) in t.betas.iter().enumerate() {
        println!("beta_{} = {b:.2e}", i + 1);
    }
    for delta in [4.0, 1.0] {
        println!(
            "delta = {delta}: extra effort {:.1}% (uniform), {:.1}% (bound)",
            100.0 * expected_extra_effort_uniform(7, delta, t.gamma),
            100.0 * extra_effort_bound(7, delta, t.gamma, &t.betas)
        );
    }

    let config = SequentialConfig::new(0.01, 7, 4.0, 1000)?;
    let mut uniform = |n: usize, s: RngStream| -> mcverify::Result<PValueVector> {
        Ok(PValueVector::new(vec!["u".into()], vec![s.rng().random::<f64>()], n, n as u64))
    };
    let mut fails = 0;
    for i in 0..2000 {
        fails += sequential_test(&mut uniform, &config, RngStream::new(1).substream(i))?.failed() as usize;
    }
    println!("uniform p-values: {fails} failures in 2000 runs (bound 20)");

    let mut shifted = |n: usize, s: RngStream| ks_iid_batch(0.05, 1.0, n, s);
    let v = sequential_test(&mut shifted, &config, RngStream::new(2))?;
    println!("N(0.05, 1) against N(0, 1): {:?} after {} iterations", v.verdict, v.iterations_run());
    for it in &v.iterations {
        println!("  n = {:>5}  q = {:.3e}  beta = {:.3e}  {:?}", it.sample_size, it.q, it.beta, it.decision);
    }
    println!("P(K > 1.36) = {:.4}", kolmogorov_sf(1.36));
    Ok(())
}
