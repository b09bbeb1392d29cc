//! Finite-state sanity checks: detailed balance of a Metropolis matrix and
//! the rank test on a three-state model, against a kernel that keeps the
//! right invariant law but is not reversible.

use mcverify::exact::check_detailed_balance;
use mcverify::models::toy::{DiscreteModel, MatrixKernel};
use mcverify::{rank_test, AssumeReversible, OrdinalRanking, RankConfig, RngStream};

fn main() -> mcverify::Result<()> {
    let model = DiscreteModel::three_state();
    let kernel = MatrixKernel::metropolis(&model);
    for y in 0..model.n_data() {
        let ok = check_detailed_balance(kernel.transition_matrix(y), &model.posterior(y), 1e-12)?;
        println!("y = {y}: posterior {:?}, detailed balance {ok}", model.posterior(y));
    }

    let ranking = [OrdinalRanking::from(&model.identity_function())];
    let config = RankConfig { thinning: 1, ..RankConfig::new(4, 4000) };
    let p = rank_test(&model, &kernel, &config, &ranking, RngStream::new(1))?;
    println!("metropolis: p = {:.3}, ranks {:?}", p.p_values[0], p.histograms[0].series[0].counts);

    let uniform = DiscreteModel::new(vec![1.0 / 3.0; 3], vec![vec![0.5, 0.5]; 3])?;
    let cycle = MatrixKernel::lazy_cycle(3, 2, 0.5);
    let balanced = check_detailed_balance(cycle.transition_matrix(0), &[1.0 / 3.0; 3], 1e-12)?;
    let ranking = [OrdinalRanking::from(&uniform.identity_function())];
    let p = rank_test(&uniform, &AssumeReversible(cycle), &config, &ranking, RngStream::new(1))?;
    println!("lazy cycle: detailed balance {balanced}, p = {:.3e}", p.p_values[0]);
    Ok(())
}
