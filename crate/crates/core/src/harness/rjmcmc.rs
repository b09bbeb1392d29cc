//! Tests of the reversible-jump sinusoid sampler: the whole sampler under each
//! combination of acceptance ratio and prior, and the within-model kernels on
//! their own.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{RankConfig, TwoSampleConfig};
use crate::models::sinusoid::{KPrior, MoveSet, RatioVariant, RjKernel, SinusoidModel, SinusoidParams};
use crate::rng::RngStream;
use crate::sequential::{SequentialConfig, SequentialVerdict, Verdict};

use super::{run_sequential, ExactTest};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RjConfig {
    pub params: SinusoidParams,
    pub ratio: RatioVariant,
    pub two_sample: TwoSampleConfig,
    pub rank: RankConfig,
    pub alpha: f64,
    pub max_iterations: usize,
    pub growth: f64,
}

impl Default for RjConfig {
    fn default() -> Self {
        RjConfig {
            params: SinusoidParams::default(),
            ratio: RatioVariant::Erroneous,
            two_sample: TwoSampleConfig::new(100, 1000, 1000),
            rank: RankConfig {
                thinning: 10,
                ..RankConfig::new(10, 1000)
            },
            alpha: 1e-5,
            max_iterations: 7,
            growth: 4.0,
        }
    }
}

impl RjConfig {
    fn sequential(&self, test: &ExactTest) -> Result<SequentialConfig> {
        SequentialConfig::new(self.alpha, self.max_iterations, self.growth, test.base_size())
    }
}

/// Outcome of both sequential tests on one sampler.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerReport {
    pub label: String,
    pub two_sample: SequentialVerdict,
    pub rank: SequentialVerdict,
    /// FAIL when either test fails.
    pub verdict: Verdict,
}

fn run_both(
    label: String,
    model: &SinusoidModel,
    kernel: &RjKernel,
    config: &RjConfig,
    function_is_k: bool,
    stream: RngStream,
) -> Result<SamplerReport> {
    let functions = vec![if function_is_k {
        model.k_function()
    } else {
        model.first_frequency_function()
    }];
    let two = ExactTest::TwoSample(config.two_sample);
    let rank = ExactTest::Rank(config.rank);
    let two_sample = run_sequential(model, kernel, &two, &functions, &config.sequential(&two)?, stream.substream(0))?;
    let rank = run_sequential(model, kernel, &rank, &functions, &config.sequential(&rank)?, stream.substream(1))?;
    let verdict = if two_sample.failed() || rank.failed() {
        Verdict::Fail
    } else {
        Verdict::Ok
    };
    Ok(SamplerReport {
        label,
        two_sample,
        rank,
        verdict,
    })
}

pub fn cell_label(ratio: RatioVariant, prior: KPrior) -> String {
    let r = match ratio {
        RatioVariant::Erroneous => "erroneous",
        RatioVariant::Corrected => "corrected",
    };
    let p = match prior {
        KPrior::TruncatedPoisson => "truncated-poisson".to_string(),
        KPrior::AcceleratedPoisson => "accelerated-poisson".to_string(),
        KPrior::Fixed(k) => format!("fixed-{k}"),
    };
    format!("{r}+{p}")
}

/// Full sampler, test function `k`, with the ratio and prior in `config`.
pub fn rjmcmc_cell(config: &RjConfig, stream: RngStream) -> Result<SamplerReport> {
    let model = SinusoidModel::new(config.params.clone())?;
    let kernel = RjKernel::new(&model, config.ratio, MoveSet::ReversibleJump)?;
    run_both(cell_label(config.ratio, config.params.prior), &model, &kernel, config, true, stream)
}

/// All four combinations of ratio and prior.
pub fn rjmcmc_quadrant(base: &RjConfig, stream: RngStream) -> Result<Vec<SamplerReport>> {
    let mut out = Vec::new();
    let cells = [
        (RatioVariant::Erroneous, KPrior::TruncatedPoisson),
        (RatioVariant::Corrected, KPrior::TruncatedPoisson),
        (RatioVariant::Erroneous, KPrior::AcceleratedPoisson),
        (RatioVariant::Corrected, KPrior::AcceleratedPoisson),
    ];
    for (i, (ratio, prior)) in cells.into_iter().enumerate() {
        let cfg = RjConfig {
            ratio,
            params: base.params.clone().with_prior(prior),
            ..base.clone()
        };
        out.push(rjmcmc_cell(&cfg, stream.substream(i as u64))?);
    }
    Ok(out)
}

/// One within-model kernel with a single sinusoid, test function `w1`.
pub fn within_model_test(moves: MoveSet, config: &RjConfig, stream: RngStream) -> Result<SamplerReport> {
    let params = config.params.clone().with_prior(KPrior::Fixed(1));
    let model = SinusoidModel::new(params)?;
    let kernel = RjKernel::new(&model, config.ratio, moves)?;
    let label = match moves {
        MoveSet::Local => "local-frequency-kernel",
        MoveSet::Global => "global-frequency-kernel",
        MoveSet::ReversibleJump => "reversible-jump",
    };
    run_both(label.into(), &model, &kernel, config, false, stream)
}

/// Within-model test sizes: `N1 = N2 = 10^4`, `L = 100` for the two-sample
/// test and `10^4` ranks of chains with `L = 10`, thinning 10.
pub fn within_model_config(base: &RjConfig) -> RjConfig {
    RjConfig {
        two_sample: TwoSampleConfig::new(100, 10_000, 10_000),
        rank: RankConfig {
            thinning: 10,
            ..RankConfig::new(10, 10_000)
        },
        ..base.clone()
    }
}
