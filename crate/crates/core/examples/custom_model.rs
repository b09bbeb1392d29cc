//! Testing a sampler for a model defined outside the library: a Poisson
//! likelihood with a Gamma prior on the rate, sampled with a random-walk
//! Metropolis kernel on the log rate. A second kernel forgets the Jacobian of
//! the log transform.

use mcverify::harness::run_sequential;
use mcverify::harness::ExactTest;
use mcverify::model::ParamSpace;
use mcverify::{GenerativeModel, KernelFamily, RankConfig, RngStream, SequentialConfig, TestFunction, TwoSampleConfig, ValueKind};
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

struct PoissonGamma {
    shape: f64,
    rate: f64,
    n: usize,
}

impl GenerativeModel for PoissonGamma {
    type Param = f64;
    type Data = Vec<u64>;

    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        Gamma::new(self.shape, 1.0 / self.rate).unwrap().sample(rng)
    }

    fn sample_data<R: Rng + ?Sized>(&self, rng: &mut R, lambda: &f64) -> Vec<u64> {
        let d = Poisson::new(lambda.max(1e-300)).unwrap();
        (0..self.n).map(|_| d.sample(rng) as u64).collect()
    }

    fn param_space(&self) -> ParamSpace {
        ParamSpace {
            dimension: 1,
            kinds: vec![ValueKind::Continuous],
        }
    }
}

impl PoissonGamma {
    fn log_post(&self, lambda: f64, y: &[u64]) -> f64 {
        let s: u64 = y.iter().sum();
        (self.shape + s as f64 - 1.0) * lambda.ln() - (self.rate + y.len() as f64) * lambda
    }
}

struct LogWalk<'a> {
    model: &'a PoissonGamma,
    step: f64,
    jacobian: bool,
}

impl KernelFamily<PoissonGamma> for LogWalk<'_> {
    type Cache = ();

    fn prepare(&self, _y: &Vec<u64>) {}

    fn step<R: Rng + ?Sized>(&self, rng: &mut R, y: &Vec<u64>, _c: &(), lambda: &f64) -> mcverify::Result<f64> {
        let proposal = lambda * (self.step * (2.0 * rng.random::<f64>() - 1.0)).exp();
        let mut log_a = self.model.log_post(proposal, y) - self.model.log_post(*lambda, y);
        if self.jacobian {
            log_a += (proposal / lambda).ln();
        }
        Ok(if rng.random::<f64>().ln() < log_a { proposal } else { *lambda })
    }

    fn declared_reversible(&self) -> bool {
        true
    }
}

fn main() -> mcverify::Result<()> {
    let model = PoissonGamma { shape: 2.0, rate: 1.0, n: 5 };
    let functions = vec![
        TestFunction::continuous("lambda", |l: &f64, _: &Vec<u64>| *l),
        TestFunction::continuous("loglik", |l: &f64, y: &Vec<u64>| {
            y.iter().map(|&k| k as f64 * l.ln() - l).sum()
        }),
    ];
    let tests = [
        ExactTest::TwoSample(TwoSampleConfig::new(20, 1000, 1000)),
        ExactTest::Rank(RankConfig { thinning: 2, ..RankConfig::new(10, 1000) }),
    ];
    for jacobian in [true, false] {
        let kernel = LogWalk { model: &model, step: 0.8, jacobian };
        for test in &tests {
            let seq = SequentialConfig::defaults(test.base_size());
            let v = run_sequential(&model, &kernel, test, &functions, &seq, RngStream::new(5))?;
            println!(
                "jacobian = {jacobian:<5} {:<10} {:?} (iterations {}, effort {})",
                test.name(),
                v.verdict,
                v.iterations_run(),
                v.effort
            );
        }
    }
    Ok(())
}
