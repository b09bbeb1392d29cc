//! Rejection rates of the sequential tests when the sampler assumes the wrong
//! prior, at a reduced number of repetitions.

use mcverify::harness::gaussian::{prior_rejection_rate, PriorScenario};
use mcverify::harness::ExactTest;
use mcverify::{RankConfig, RngStream, SequentialConfig, TwoSampleConfig};

fn main() -> mcverify::Result<()> {
    let runs = 100;
    let tests = [
        ExactTest::TwoSample(TwoSampleConfig::new(50, 1000, 1000)),
        ExactTest::Rank(RankConfig { thinning: 5, ..RankConfig::new(10, 1000) }),
    ];
    for (t, test) in tests.iter().enumerate() {
        let seq = SequentialConfig::new(0.01, 3, 2.0, test.base_size())?;
        for (s, scenario) in PriorScenario::ALL.iter().enumerate() {
            let stream = RngStream::new(4).substream(t as u64).substream(s as u64);
            let r = prior_rejection_rate(*scenario, test, &seq, runs, stream)?;
            println!("{:<11} {:<8} {:.2} +- {:.2}", test.name(), scenario.label(), r.rate, r.std_error);
        }
    }
    Ok(())
}
