//! The two fixed-dimension frequency kernels with one sinusoid. The frequency
//! is uniform on (0, pi) a priori, so fitted draws can also be checked
//! against that CDF directly instead of against direct draws.

use std::f64::consts::PI;

use mcverify::exact::one_sample_fitted_test;
use mcverify::models::sinusoid::{KPrior, MoveSet, RatioVariant, RjKernel, SinusoidModel, SinusoidParams};
use mcverify::{rank_test, two_sample_test, OrdinalRanking, RankConfig, RngStream, TwoSampleConfig};

fn main() -> mcverify::Result<()> {
    let model = SinusoidModel::new(SinusoidParams::default().with_prior(KPrior::Fixed(1)))?;
    let w1 = model.first_frequency_function();
    let two = TwoSampleConfig::new(100, 2000, 2000);
    let rank = RankConfig { thinning: 10, ..RankConfig::new(10, 2000) };
    for moves in [MoveSet::Local, MoveSet::Global] {
        let kernel = RjKernel::new(&model, RatioVariant::Corrected, moves)?;
        let s = RngStream::new(6);
        let p2 = two_sample_test(&model, &kernel, &two, std::slice::from_ref(&w1), s)?;
        let p1 = one_sample_fitted_test(&model, &kernel, &two, &[(w1.clone(), |w: f64| w / PI)], s)?;
        let pr = rank_test(&model, &kernel, &rank, &[OrdinalRanking::from(&w1)], s)?;
        println!(
            "{moves:?}: two-sample p = {:.3}, against U(0, pi) p = {:.3}, rank p = {:.3}",
            p2.p_values[0], p1.p_values[0], pr.p_values[0]
        );
    }
    Ok(())
}
