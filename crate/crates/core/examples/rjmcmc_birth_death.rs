//! The reversible-jump sinusoid sampler with the erroneous and the corrected
//! birth ratio, tested on the number of sinusoids. Smaller than the full
//! experiment; `mcverify rjmcmc --quadrant` runs that.

use mcverify::harness::rjmcmc::{rjmcmc_cell, RjConfig};
use mcverify::models::sinusoid::{birth_ratio, KPrior, RatioVariant, SinusoidModel, SinusoidParams};
use mcverify::{GenerativeModel, RankConfig, RngStream, TwoSampleConfig};

fn main() -> mcverify::Result<()> {
    let model = SinusoidModel::new(SinusoidParams::default())?;
    let mut rng = RngStream::new(0).rng();
    let w = model.sample_prior(&mut rng);
    let y = model.sample_data(&mut rng, &w);
    for variant in [RatioVariant::Erroneous, RatioVariant::Corrected] {
        println!("k = {}, {variant:?} birth ratio at w' = 1.0: {:.4e}", w.k(), birth_ratio(&model, &y, &w.w, 1.0, variant));
    }

    for ratio in [RatioVariant::Erroneous, RatioVariant::Corrected] {
        let config = RjConfig {
            ratio,
            params: SinusoidParams::default().with_prior(KPrior::TruncatedPoisson),
            two_sample: TwoSampleConfig::new(100, 500, 500),
            rank: RankConfig { thinning: 10, ..RankConfig::new(10, 500) },
            ..RjConfig::default()
        };
        let report = rjmcmc_cell(&config, RngStream::new(2))?;
        let q = |v: &mcverify::SequentialVerdict| v.iterations.iter().map(|i| i.q).fold(1.0, f64::min);
        println!(
            "{}: two-sample {:?} (q {:.1e}), rank {:?} (q {:.1e})",
            report.label,
            report.two_sample.verdict,
            q(&report.two_sample),
            report.rank.verdict,
            q(&report.rank)
        );
    }
    Ok(())
}
