//! Two-sample test on the bivariate Gaussian Gibbs sampler: a correct sampler
//! and one with the wrong conditional expectation.

use mcverify::models::gaussian::{gibbs_kernel, standard_test_functions, GaussianModel, GaussianParams, GibbsBug, GibbsVariant, Scan};
use mcverify::{two_sample_test, RngStream, TwoSampleConfig};

fn main() -> mcverify::Result<()> {
    let model = GaussianModel::new(GaussianParams::default())?;
    let functions = standard_test_functions(&model);
    let config = TwoSampleConfig::new(5, 500, 500);

    for (label, variant) in [
        ("correct", GibbsVariant::correct(Scan::Random)),
        ("wrong expectation", GibbsVariant::with_bug(GibbsBug::WrongExpectation)),
    ] {
        let kernel = gibbs_kernel(variant)?;
        let p = two_sample_test(&model, &kernel, &config, &functions, RngStream::new(7))?;
        println!("{label}:");
        for (name, pv) in p.labels.iter().zip(&p.p_values) {
            println!("  {name:<14} p = {pv:.3e}");
        }
    }
    Ok(())
}
