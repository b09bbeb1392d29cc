//! Power studies on the Gaussian model: seeded Gibbs bugs and mistaken
//! priors.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{RankConfig, TwoSampleConfig};
use crate::model::{AssumeReversible, TestFunction};
use crate::models::gaussian::{
    gibbs_kernel, standard_test_functions, GaussianModel, GaussianParams, GibbsBug, GibbsVariant, Scan,
};
use crate::rng::RngStream;
use crate::sequential::{extra_effort_bound, thresholds, SequentialConfig};

use super::{rejection_rate, run_sequential, ExactTest, RateEstimate, TableRow};

/// Columns of the seeded-bug study.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BugScenario {
    RandomScan,
    SystematicScan,
    WrongExpectation,
    WrongVariance,
    Truncated,
}

impl BugScenario {
    pub const ALL: [BugScenario; 5] = [
        BugScenario::RandomScan,
        BugScenario::SystematicScan,
        BugScenario::WrongExpectation,
        BugScenario::WrongVariance,
        BugScenario::Truncated,
    ];

    pub fn variant(self) -> GibbsVariant {
        match self {
            BugScenario::RandomScan => GibbsVariant::correct(Scan::Random),
            BugScenario::SystematicScan => GibbsVariant::correct(Scan::Systematic),
            BugScenario::WrongExpectation => GibbsVariant::with_bug(GibbsBug::WrongExpectation),
            BugScenario::WrongVariance => GibbsVariant::with_bug(GibbsBug::WrongVariance),
            BugScenario::Truncated => GibbsVariant::with_bug(GibbsBug::Truncated),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BugScenario::RandomScan => "correct-random-scan",
            BugScenario::SystematicScan => "correct-systematic-scan",
            BugScenario::WrongExpectation => "wrong-expectation",
            BugScenario::WrongVariance => "wrong-variance",
            BugScenario::Truncated => "truncated",
        }
    }
}

/// Columns of the mistaken-prior study. The data always come from the
/// reference prior; only the sampler's assumed prior changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriorScenario {
    Correct,
    MeanShift,
    Scale,
    Correlation,
}

impl PriorScenario {
    pub const ALL: [PriorScenario; 4] = [
        PriorScenario::Correct,
        PriorScenario::MeanShift,
        PriorScenario::Scale,
        PriorScenario::Correlation,
    ];

    pub fn assumed(self) -> GaussianParams {
        let base = GaussianParams::default();
        match self {
            PriorScenario::Correct => base,
            PriorScenario::MeanShift => GaussianParams { mu: 10.0, ..base },
            PriorScenario::Scale => GaussianParams { sigma: 5.0, ..base },
            PriorScenario::Correlation => GaussianParams { rho: 0.5, ..base },
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PriorScenario::Correct => "correct",
            PriorScenario::MeanShift => "mu=10",
            PriorScenario::Scale => "sigma=5",
            PriorScenario::Correlation => "rho=0.5",
        }
    }
}

/// Rejection rate of one sequential test of one Gibbs variant, using the
/// named subset of the standard test functions (all of them when `names` is
/// empty).
pub fn gaussian_rejection_rate(
    variant: GibbsVariant,
    test: &ExactTest,
    names: &[&str],
    seq: &SequentialConfig,
    runs: usize,
    stream: RngStream,
) -> Result<RateEstimate> {
    let model = GaussianModel::new(GaussianParams::default())?;
    // Wrapped so the rank test also runs on the systematic scan, which is
    // invariant but not reversible.
    let kernel = AssumeReversible(gibbs_kernel(variant)?);
    let functions: Vec<TestFunction<GaussianModel>> = standard_test_functions(&model)
        .into_iter()
        .filter(|f| names.is_empty() || names.contains(&f.name()))
        .collect();
    let seq = SequentialConfig {
        initial_size: test.base_size(),
        ..*seq
    };
    rejection_rate(runs, stream, |s| {
        Ok(run_sequential(&model, &kernel, test, &functions, &seq, s)?.failed())
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BugTableConfig {
    pub runs: usize,
    pub alpha: f64,
    pub max_iterations: usize,
    pub growth: f64,
    pub two_sample: TwoSampleConfig,
    pub rank: RankConfig,
    pub scenarios: Vec<BugScenario>,
}

impl Default for BugTableConfig {
    fn default() -> Self {
        BugTableConfig {
            runs: 500,
            alpha: 0.01,
            max_iterations: 3,
            growth: 2.0,
            two_sample: TwoSampleConfig::new(5, 500, 500),
            rank: RankConfig::new(5, 500),
            scenarios: BugScenario::ALL.to_vec(),
        }
    }
}

/// Every test function on its own and all of them together, for both tests
/// and every scenario.
pub fn bug_table(config: &BugTableConfig, stream: RngStream) -> Result<Vec<TableRow>> {
    let model = GaussianModel::new(GaussianParams::default())?;
    let names: Vec<String> = standard_test_functions(&model).iter().map(|f| f.name().to_string()).collect();
    let seq = SequentialConfig::new(config.alpha, config.max_iterations, config.growth, 1)?;
    let tests = [
        ("seq-two-sample", ExactTest::TwoSample(config.two_sample)),
        ("seq-rank", ExactTest::Rank(config.rank)),
    ];
    let mut rows = Vec::new();
    for (si, scenario) in config.scenarios.iter().enumerate() {
        for (ti, (test_label, test)) in tests.iter().enumerate() {
            let groups: Vec<(String, Vec<&str>)> = names
                .iter()
                .map(|n| (n.clone(), vec![n.as_str()]))
                .chain(std::iter::once(("All".to_string(), Vec::new())))
                .collect();
            for (gi, (label, subset)) in groups.iter().enumerate() {
                let s = stream.substream(si as u64).substream(ti as u64).substream(gi as u64);
                let rate = gaussian_rejection_rate(scenario.variant(), test, subset, &seq, config.runs, s)?;
                rows.push(TableRow {
                    scenario: scenario.label().into(),
                    test: (*test_label).into(),
                    function: label.clone(),
                    rate,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriorTableConfig {
    pub runs: usize,
    pub alpha: f64,
    pub max_iterations: usize,
    pub growth: f64,
    pub two_sample: TwoSampleConfig,
    pub rank: RankConfig,
    pub scenarios: Vec<PriorScenario>,
    /// Also run the single-shot tests with a matched budget.
    pub non_sequential: bool,
    /// Also run the joint-space variants on the mean-shift scenario.
    pub extensions: bool,
    pub joint_two_sample: TwoSampleConfig,
    pub joint_rank: RankConfig,
}

impl Default for PriorTableConfig {
    fn default() -> Self {
        let mut joint_two_sample = TwoSampleConfig::new(2000, 1000, 1000);
        joint_two_sample.gibbs_extension = true;
        PriorTableConfig {
            runs: 500,
            alpha: 0.01,
            max_iterations: 3,
            growth: 2.0,
            two_sample: TwoSampleConfig::new(50, 1000, 1000),
            rank: RankConfig {
                thinning: 5,
                ..RankConfig::new(10, 1000)
            },
            scenarios: PriorScenario::ALL.to_vec(),
            non_sequential: true,
            extensions: false,
            joint_two_sample,
            joint_rank: RankConfig {
                thinning: 200,
                joint_update_prob: 0.5,
                ..RankConfig::new(10, 1000)
            },
        }
    }
}

/// Size of a single-shot test with the same expected null effort as the
/// sequential one started at `n0`.
pub fn matched_single_size(n0: usize, alpha: f64, k: usize, delta: f64) -> Result<usize> {
    let t = thresholds(alpha, k)?;
    Ok((n0 as f64 * (1.0 + extra_effort_bound(k, delta, t.gamma, &t.betas))).round() as usize)
}

/// Rejection rate of one test against a sampler with a mistaken prior.
pub fn prior_rejection_rate(
    scenario: PriorScenario,
    test: &ExactTest,
    seq: &SequentialConfig,
    runs: usize,
    stream: RngStream,
) -> Result<RateEstimate> {
    gaussian_rejection_rate(GibbsVariant::with_assumed_prior(scenario.assumed()), test, &[], seq, runs, stream)
}

pub fn prior_table(config: &PriorTableConfig, stream: RngStream) -> Result<Vec<TableRow>> {
    let seq = SequentialConfig::new(config.alpha, config.max_iterations, config.growth, 1)?;
    let single = SequentialConfig::new(config.alpha, 1, 1.0, 1)?;
    let mut plan: Vec<(String, ExactTest, SequentialConfig, Vec<PriorScenario>)> = vec![
        ("seq-two-sample".into(), ExactTest::TwoSample(config.two_sample), seq, config.scenarios.clone()),
        ("seq-rank".into(), ExactTest::Rank(config.rank), seq, config.scenarios.clone()),
    ];
    if config.non_sequential {
        let n_two = matched_single_size(config.two_sample.n_fitted, config.alpha, config.max_iterations, config.growth)?;
        let n_rank = matched_single_size(config.rank.n_reps, config.alpha, config.max_iterations, config.growth)?;
        plan.push((
            "two-sample".into(),
            ExactTest::TwoSample(config.two_sample.with_size(n_two)),
            single,
            config.scenarios.clone(),
        ));
        plan.push((
            "rank".into(),
            ExactTest::Rank(config.rank.with_size(n_rank)),
            single,
            config.scenarios.clone(),
        ));
    }
    if config.extensions {
        let only_shift = vec![PriorScenario::MeanShift];
        plan.push((
            "seq-joint-two-sample".into(),
            ExactTest::TwoSample(config.joint_two_sample),
            seq,
            only_shift.clone(),
        ));
        plan.push(("seq-joint-rank".into(), ExactTest::Rank(config.joint_rank), seq, only_shift));
    }

    let mut rows = Vec::new();
    for (ti, (label, test, seq, scenarios)) in plan.iter().enumerate() {
        for scenario in scenarios {
            let si = PriorScenario::ALL.iter().position(|s| s == scenario).unwrap_or(0);
            let s = stream.substream(ti as u64).substream(si as u64);
            let rate = prior_rejection_rate(*scenario, test, seq, config.runs, s)?;
            rows.push(TableRow {
                scenario: scenario.label().into(),
                test: label.clone(),
                function: "All".into(),
                rate,
            });
        }
    }
    Ok(rows)
}
