//! Command-line front end.
//!
//! Exit codes: 0 when every sequential verdict is OK (or a table finished),
//! 1 when a verdict is FAIL, 2 on usage or runtime errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{invalid, Error, Result};
use crate::exact::{RankConfig, TwoSampleConfig};
use crate::harness::gaussian::{bug_table, prior_table, BugScenario, BugTableConfig, PriorTableConfig};
use crate::harness::rjmcmc::{
    rjmcmc_cell, rjmcmc_quadrant, within_model_config, within_model_test, RjConfig, SamplerReport,
};
use crate::harness::tuning::{tuning_table, TuningConfig};
use crate::harness::{run_sequential, write_csv, write_histogram_csv, ExactTest, TableRow};
use crate::model::{AssumeReversible, GenerativeModel, KernelFamily, TestFunction};
use crate::models::gaussian::{gibbs_kernel, standard_test_functions, GaussianModel, GaussianParams, GibbsVariant};
use crate::harness::gaussian::PriorScenario;
use crate::models::sinusoid::{KPrior, MoveSet, RatioVariant, RjKernel, SinusoidModel, SinusoidParams};
use crate::report::Report;
use crate::rng::RngStream;
use crate::sequential::{SequentialConfig, SequentialVerdict, Verdict};

const DESK_REPS: usize = 500;
const PAPER_REPS: usize = 10_000;

#[derive(Parser, Debug)]
#[command(name = "mcverify", version, about = "Exact statistical unit tests for MCMC samplers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one sequential test on a benchmark sampler and write a JSON report.
    Test(TestArgs),
    /// Rejection rates for the seeded Gibbs bugs, as CSV.
    Table1(TableArgs),
    /// Rejection rates for samplers with a mistaken prior, as CSV.
    Table2(Table2Args),
    /// Power of the sequential wrapper over a (k, delta) grid, as CSV.
    Tuning(TuningArgs),
    /// Test the reversible-jump sinusoid sampler.
    Rjmcmc(RjArgs),
}

/// Flags shared by every subcommand. A JSON file given with `--config` may set
/// any of them (and any subcommand flag); flags on the command line win.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct CommonArgs {
    /// Master seed; every random draw is derived from it.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads. Results do not depend on this value.
    #[arg(long, env = "MCVERIFY_THREADS")]
    pub threads: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overall false-rejection bound of the sequential wrapper.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Maximum number of sequential iterations.
    #[arg(long)]
    pub k: Option<usize>,
    /// Sample-size multiplier after the first iteration.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Replications: rank statistics for `test`, experiment repetitions for
    /// the tables.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Use the full replication counts of the published study.
    #[arg(long)]
    #[serde(default)]
    pub paper_scale: bool,
    /// JSON file with default values for any flag.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct TestArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    /// gaussian or sinusoid.
    #[arg(long)]
    pub model: Option<String>,
    /// Gaussian: correct-random-scan, correct-systematic-scan, wrong-mean,
    /// wrong-variance, truncated, prior-mean-shift, prior-scale,
    /// prior-correlation. Sinusoid: erroneous or corrected.
    #[arg(long)]
    pub variant: Option<String>,
    /// two-sample or rank.
    #[arg(long)]
    pub test: Option<String>,
    /// Kernel steps per fitted draw, or chain length for the rank test.
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub chain_length: Option<usize>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long)]
    pub thinning: Option<usize>,
    /// Probability of refreshing `y` instead of moving `theta` in the rank test.
    #[arg(long)]
    pub joint_prob: Option<f64>,
    /// Resample `y` after each kernel step in the two-sample test.
    #[arg(long)]
    #[serde(default)]
    pub gibbs_extension: bool,
    /// Run the rank test even if the kernel does not declare reversibility.
    #[arg(long)]
    #[serde(default)]
    pub assume_reversible: bool,
    /// Comma-separated subset of test functions.
    #[arg(long)]
    pub functions: Option<String>,
    /// Sinusoid prior on k: truncated-poisson, accelerated-poisson or fixed-K.
    #[arg(long)]
    pub prior: Option<String>,
    /// Sinusoid moves: rj, local or global.
    #[arg(long)]
    pub moves: Option<String>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct TableArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    /// Comma-separated scenarios; all when absent.
    #[arg(long)]
    pub scenarios: Option<String>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct Table2Args {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    /// Also run the joint-space tests on the mean-shift scenario.
    #[arg(long)]
    #[serde(default)]
    pub extensions: bool,
    /// Skip the single-shot tests with matched budget.
    #[arg(long)]
    #[serde(default)]
    pub sequential_only: bool,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct TuningArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    /// Single-shot size 10^3 and the matching alternatives instead of 10^4.
    #[arg(long)]
    #[serde(default)]
    pub small: bool,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct RjArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    /// erroneous or corrected birth/death ratio.
    #[arg(long)]
    pub variant: Option<String>,
    /// truncated-poisson or accelerated-poisson.
    #[arg(long)]
    pub prior: Option<String>,
    /// Run all four ratio/prior combinations.
    #[arg(long)]
    #[serde(default)]
    pub quadrant: bool,
    /// Also test the two within-model kernels with one sinusoid.
    #[arg(long)]
    #[serde(default)]
    pub within_model: bool,
    /// CSV file for the k distributions and rank histograms.
    #[arg(long)]
    pub histograms: Option<PathBuf>,
}

/// Fills unset fields of `args` from the JSON file, if any.
fn merge_config<T: Serialize + DeserializeOwned>(args: &T, file: Option<&Path>) -> Result<T> {
    let mut value = serde_json::to_value(args)?;
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)?;
        let from_file: Value = serde_json::from_str(&text)?;
        let Value::Object(defaults) = from_file else {
            return Err(invalid("config file must contain a JSON object"));
        };
        let Value::Object(current) = &mut value else {
            unreachable!("argument structs serialise to objects")
        };
        for (key, v) in defaults {
            match current.get(&key) {
                None | Some(Value::Null) | Some(Value::Bool(false)) => {
                    current.insert(key, v);
                }
                _ => {}
            }
        }
    }
    Ok(serde_json::from_value(value)?)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(invalid("--threads must be at least 1"));
        }
        // Fails only if a pool already exists, for example when called twice
        // in one process; the existing pool is then kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn exit_for(verdict: Verdict) -> ExitCode {
    match verdict {
        Verdict::Ok => ExitCode::SUCCESS,
        Verdict::Fail => ExitCode::from(1),
    }
}

/// Parses `args` and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Test(a) => {
            let a = merge_config(&a, a.common.config.clone().as_deref())?;
            set_threads(a.common.threads)?;
            cmd_test(&a)
        }
        Command::Table1(a) => {
            let a = merge_config(&a, a.common.config.clone().as_deref())?;
            set_threads(a.common.threads)?;
            cmd_table1(&a)
        }
        Command::Table2(a) => {
            let a = merge_config(&a, a.common.config.clone().as_deref())?;
            set_threads(a.common.threads)?;
            cmd_table2(&a)
        }
        Command::Tuning(a) => {
            let a = merge_config(&a, a.common.config.clone().as_deref())?;
            set_threads(a.common.threads)?;
            cmd_tuning(&a)
        }
        Command::Rjmcmc(a) => {
            let a = merge_config(&a, a.common.config.clone().as_deref())?;
            set_threads(a.common.threads)?;
            cmd_rjmcmc(&a)
        }
    }
}

/// The fully resolved settings of a `test` run, echoed in the report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResolvedTest {
    pub model: String,
    pub variant: String,
    pub test: ExactTest,
    pub sequential: SequentialConfig,
    pub functions: Vec<String>,
    pub assume_reversible: bool,
    pub prior: Option<KPrior>,
    pub moves: Option<MoveSet>,
}

fn gaussian_variant(name: &str) -> Result<GibbsVariant> {
    use crate::models::gaussian::{GibbsBug, Scan};
    Ok(match name {
        "correct-random-scan" | "correct" => GibbsVariant::correct(Scan::Random),
        "correct-systematic-scan" => GibbsVariant::correct(Scan::Systematic),
        "wrong-mean" | "wrong-expectation" => GibbsVariant::with_bug(GibbsBug::WrongExpectation),
        "wrong-variance" => GibbsVariant::with_bug(GibbsBug::WrongVariance),
        "truncated" => GibbsVariant::with_bug(GibbsBug::Truncated),
        "prior-mean-shift" => GibbsVariant::with_assumed_prior(PriorScenario::MeanShift.assumed()),
        "prior-scale" => GibbsVariant::with_assumed_prior(PriorScenario::Scale.assumed()),
        "prior-correlation" => GibbsVariant::with_assumed_prior(PriorScenario::Correlation.assumed()),
        other => return Err(invalid(format!("unknown gaussian variant '{other}'"))),
    })
}

fn ratio_variant(name: &str) -> Result<RatioVariant> {
    match name {
        "erroneous" => Ok(RatioVariant::Erroneous),
        "corrected" => Ok(RatioVariant::Corrected),
        other => Err(invalid(format!("unknown ratio variant '{other}'"))),
    }
}

fn k_prior(name: &str) -> Result<KPrior> {
    match name {
        "truncated-poisson" => Ok(KPrior::TruncatedPoisson),
        "accelerated-poisson" => Ok(KPrior::AcceleratedPoisson),
        other => match other.strip_prefix("fixed-").and_then(|k| k.parse().ok()) {
            Some(k) => Ok(KPrior::Fixed(k)),
            None => Err(invalid(format!("unknown prior '{other}'"))),
        },
    }
}

fn move_set(name: &str) -> Result<MoveSet> {
    match name {
        "rj" => Ok(MoveSet::ReversibleJump),
        "local" | "lfk" => Ok(MoveSet::Local),
        "global" | "gfk" => Ok(MoveSet::Global),
        other => Err(invalid(format!("unknown move set '{other}'"))),
    }
}

fn select_functions<M: GenerativeModel>(all: Vec<TestFunction<M>>, subset: Option<&str>) -> Result<Vec<TestFunction<M>>> {
    let Some(list) = subset else {
        return Ok(all);
    };
    let wanted: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    for w in &wanted {
        if !all.iter().any(|f| f.name() == *w) {
            let names: Vec<&str> = all.iter().map(|f| f.name()).collect();
            return Err(invalid(format!("unknown test function '{w}'; available: {}", names.join(", "))));
        }
    }
    Ok(all.into_iter().filter(|f| wanted.contains(&f.name())).collect())
}

fn run_test<M, K>(
    model: &M,
    kernel: K,
    resolved: &ResolvedTest,
    functions: &[TestFunction<M>],
    stream: RngStream,
) -> Result<SequentialVerdict>
where
    M: GenerativeModel,
    K: KernelFamily<M>,
{
    if resolved.assume_reversible {
        run_sequential(model, &AssumeReversible(kernel), &resolved.test, functions, &resolved.sequential, stream)
    } else {
        run_sequential(model, &kernel, &resolved.test, functions, &resolved.sequential, stream)
    }
}

fn cmd_test(a: &TestArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let c = &a.common;
    let seed = c.seed.unwrap_or(0);
    let model_name = a.model.clone().unwrap_or_else(|| "gaussian".into());
    let sinusoid = match model_name.as_str() {
        "gaussian" => false,
        "sinusoid" => true,
        other => return Err(invalid(format!("unknown model '{other}'"))),
    };
    let test_name = a.test.clone().unwrap_or_else(|| "two-sample".into());
    let moves = if sinusoid {
        Some(move_set(a.moves.as_deref().unwrap_or("rj"))?)
    } else {
        None
    };
    let within = matches!(moves, Some(MoveSet::Local | MoveSet::Global));
    let (default_steps, default_n) = match (sinusoid, test_name.as_str()) {
        (false, _) => (5, 500),
        (true, "two-sample") => (100, 1000),
        (true, _) => (10, 1000),
    };
    let steps = a.chain_length.unwrap_or(default_steps);
    let test = match test_name.as_str() {
        "two-sample" => {
            let n1 = a.n1.unwrap_or(default_n);
            let mut cfg = TwoSampleConfig::new(steps, n1, a.n2.unwrap_or(n1));
            cfg.gibbs_extension = a.gibbs_extension;
            ExactTest::TwoSample(cfg)
        }
        "rank" => ExactTest::Rank(RankConfig {
            thinning: a.thinning.unwrap_or(if sinusoid { 10 } else { 1 }),
            joint_update_prob: a.joint_prob.unwrap_or(0.0),
            ..RankConfig::new(steps, c.reps.unwrap_or(default_n))
        }),
        other => return Err(invalid(format!("unknown test '{other}'"))),
    };
    let sequential = SequentialConfig::new(
        c.alpha.unwrap_or(1e-5),
        c.k.unwrap_or(7),
        c.delta.unwrap_or(4.0),
        test.base_size(),
    )?;
    let stream = RngStream::new(seed);

    let (resolved, verdict) = if sinusoid {
        let variant = a.variant.clone().unwrap_or_else(|| "corrected".into());
        let prior = match &a.prior {
            Some(p) => k_prior(p)?,
            None if within => KPrior::Fixed(1),
            None => KPrior::TruncatedPoisson,
        };
        let model = SinusoidModel::new(SinusoidParams::default().with_prior(prior))?;
        let all = if within {
            vec![model.first_frequency_function()]
        } else {
            vec![model.k_function()]
        };
        let functions = select_functions(all, a.functions.as_deref())?;
        let kernel = RjKernel::new(&model, ratio_variant(&variant)?, moves.expect("sinusoid has moves"))?;
        let resolved = ResolvedTest {
            model: model_name,
            variant,
            test,
            sequential,
            functions: functions.iter().map(|f| f.name().to_string()).collect(),
            assume_reversible: a.assume_reversible,
            prior: Some(prior),
            moves,
        };
        let verdict = run_test(&model, kernel, &resolved, &functions, stream)?;
        (resolved, verdict)
    } else {
        let variant = a.variant.clone().unwrap_or_else(|| "correct-random-scan".into());
        let model = GaussianModel::new(GaussianParams::default())?;
        let functions = select_functions(standard_test_functions(&model), a.functions.as_deref())?;
        let kernel = gibbs_kernel(gaussian_variant(&variant)?)?;
        let resolved = ResolvedTest {
            model: model_name,
            variant,
            test,
            sequential,
            functions: functions.iter().map(|f| f.name().to_string()).collect(),
            assume_reversible: a.assume_reversible,
            prior: None,
            moves: None,
        };
        let verdict = run_test(&model, kernel, &resolved, &functions, stream)?;
        (resolved, verdict)
    };

    let report = Report::new("test", seed, &resolved, &verdict, start.elapsed())?;
    report.write(output(c.out.as_deref())?)?;
    Ok(exit_for(verdict.verdict))
}

fn reps(c: &CommonArgs) -> usize {
    c.reps.unwrap_or(if c.paper_scale { PAPER_REPS } else { DESK_REPS })
}

fn write_table(rows: &[TableRow], out: Option<&Path>) -> Result<ExitCode> {
    write_csv(rows, output(out)?)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_list<T>(list: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(f).collect()
}

fn cmd_table1(a: &TableArgs) -> Result<ExitCode> {
    let c = &a.common;
    let mut cfg = BugTableConfig {
        runs: reps(c),
        alpha: c.alpha.unwrap_or(0.01),
        max_iterations: c.k.unwrap_or(3),
        growth: c.delta.unwrap_or(2.0),
        ..BugTableConfig::default()
    };
    if let Some(list) = &a.scenarios {
        cfg.scenarios = parse_list(list, |s| {
            BugScenario::ALL
                .into_iter()
                .find(|b| b.label() == s)
                .ok_or_else(|| invalid(format!("unknown scenario '{s}'")))
        })?;
    }
    let rows = bug_table(&cfg, RngStream::new(c.seed.unwrap_or(0)))?;
    write_table(&rows, c.out.as_deref())
}

fn cmd_table2(a: &Table2Args) -> Result<ExitCode> {
    let c = &a.common;
    let cfg = PriorTableConfig {
        runs: reps(c),
        alpha: c.alpha.unwrap_or(0.01),
        max_iterations: c.k.unwrap_or(3),
        growth: c.delta.unwrap_or(2.0),
        non_sequential: !a.sequential_only,
        extensions: a.extensions,
        ..PriorTableConfig::default()
    };
    let rows = prior_table(&cfg, RngStream::new(c.seed.unwrap_or(0)))?;
    write_table(&rows, c.out.as_deref())
}

fn cmd_tuning(a: &TuningArgs) -> Result<ExitCode> {
    let c = &a.common;
    if c.alpha.is_some() || c.k.is_some() || c.delta.is_some() {
        return Err(invalid("tuning sweeps alpha, k and delta itself; drop --alpha, --k and --delta"));
    }
    let runs = reps(c);
    let cfg = if a.small {
        TuningConfig::small(runs)
    } else {
        TuningConfig::large(runs)
    };
    let rows = tuning_table(&cfg, RngStream::new(c.seed.unwrap_or(0)))?;
    write_table(&rows, c.out.as_deref())
}

#[derive(Serialize)]
struct RjResult<'a> {
    samplers: &'a [SamplerReport],
}

fn cmd_rjmcmc(a: &RjArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let c = &a.common;
    let seed = c.seed.unwrap_or(0);
    let prior = k_prior(a.prior.as_deref().unwrap_or("truncated-poisson"))?;
    if matches!(prior, KPrior::Fixed(_)) {
        return Err(invalid("rjmcmc needs a random number of sinusoids; use `test --moves` for fixed k"));
    }
    let base = RjConfig {
        params: SinusoidParams::default().with_prior(prior),
        ratio: ratio_variant(a.variant.as_deref().unwrap_or("erroneous"))?,
        alpha: c.alpha.unwrap_or(1e-5),
        max_iterations: c.k.unwrap_or(7),
        growth: c.delta.unwrap_or(4.0),
        ..RjConfig::default()
    };
    let base = match c.reps {
        Some(r) => RjConfig {
            rank: base.rank.with_size(r),
            ..base
        },
        None => base,
    };
    let stream = RngStream::new(seed);
    let mut reports = if a.quadrant {
        rjmcmc_quadrant(&base, stream.substream(0))?
    } else {
        vec![rjmcmc_cell(&base, stream.substream(0))?]
    };
    if a.within_model {
        let wm = within_model_config(&base);
        reports.push(within_model_test(MoveSet::Local, &wm, stream.substream(1))?);
        reports.push(within_model_test(MoveSet::Global, &wm, stream.substream(2))?);
    }

    #[derive(Serialize)]
    struct Echo<'a> {
        base: &'a RjConfig,
        quadrant: bool,
        within_model: bool,
    }
    let echo = Echo {
        base: &base,
        quadrant: a.quadrant,
        within_model: a.within_model,
    };
    let report = Report::new("rjmcmc", seed, &echo, &RjResult { samplers: &reports }, start.elapsed())?;
    report.write(output(c.out.as_deref())?)?;

    let hist_path = a.histograms.clone().or_else(|| {
        c.out.as_ref().map(|p| p.with_extension("histograms.csv"))
    });
    if let Some(path) = hist_path {
        let runs: Vec<(&str, &str, &SequentialVerdict)> = reports
            .iter()
            .flat_map(|r| [(r.label.as_str(), "two-sample", &r.two_sample), (r.label.as_str(), "rank", &r.rank)])
            .collect();
        write_histogram_csv(&runs, BufWriter::new(File::create(path)?)).map_err(Error::from)?;
    }

    // With the quadrant some cells are expected to fail; the exit code then
    // reports whether any sampler failed at all.
    let any_failed = reports.iter().any(|r| r.verdict == Verdict::Fail);
    Ok(exit_for(if any_failed { Verdict::Fail } else { Verdict::Ok }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_style_flags() {
        let cli = Cli::try_parse_from([
            "mcverify", "test", "--model", "gaussian", "--variant", "wrong-mean", "--test", "two-sample", "--L", "5",
            "--n1", "500", "--n2", "500",
        ])
        .unwrap();
        let Command::Test(t) = cli.command else { panic!() };
        assert_eq!(t.chain_length, Some(5));
        assert_eq!(t.n2, Some(500));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"seed": 9, "alpha": 0.001, "L": 7, "paper_scale": true}"#).unwrap();
        let args = TestArgs {
            common: CommonArgs {
                alpha: Some(0.01),
                ..CommonArgs::default()
            },
            ..TestArgs::default()
        };
        let merged = merge_config(&args, Some(&path)).unwrap();
        assert_eq!(merged.common.seed, Some(9));
        assert_eq!(merged.common.alpha, Some(0.01));
        assert_eq!(merged.chain_length, Some(7));
        assert!(merged.common.paper_scale);
    }

    #[test]
    fn names() {
        assert!(gaussian_variant("nope").is_err());
        assert_eq!(k_prior("fixed-2").unwrap(), KPrior::Fixed(2));
        assert_eq!(move_set("gfk").unwrap(), MoveSet::Global);
    }
}
