use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{GenerativeModel, KernelFamily, OrdinalRanking, TieBreak};
use crate::parallel::replicate;
use crate::rng::{Role, RngStream};
use crate::stats::chi2_uniformity;

use super::{Histogram, HistogramSeries, PValueVector};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankConfig {
    /// Number of chain states, which is also the number of rank bins (`L`).
    pub chain_length: usize,
    /// Kernel applications between recorded states.
    pub thinning: usize,
    pub n_reps: usize,
    /// Probability that an elementary update refreshes `y | theta` instead of
    /// moving `theta`. Zero gives the plain test.
    pub joint_update_prob: f64,
}

impl RankConfig {
    pub fn new(chain_length: usize, n_reps: usize) -> Self {
        RankConfig {
            chain_length,
            thinning: 1,
            n_reps,
            joint_update_prob: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.chain_length < 2 {
            return Err(invalid("rank test needs chain_length >= 2"));
        }
        if self.thinning == 0 {
            return Err(invalid("rank test needs thinning >= 1"));
        }
        if self.n_reps < self.chain_length {
            return Err(invalid("rank test needs n_reps >= chain_length"));
        }
        if !(0.0..1.0).contains(&self.joint_update_prob) {
            return Err(invalid("joint_update_prob must lie in [0, 1)"));
        }
        Ok(())
    }

    pub fn with_size(&self, n_reps: usize) -> Self {
        RankConfig { n_reps, ..*self }
    }
}

fn require_reversible<M: GenerativeModel, K: KernelFamily<M>>(kernel: &K) -> Result<()> {
    if kernel.declared_reversible() {
        Ok(())
    } else {
        Err(Error::Contract(
            "rank test requires a kernel declared reversible; wrap it in AssumeReversible to override".into(),
        ))
    }
}

/// Ranks of the pivot state under each ranking, all computed on one chain
/// realisation.
///
/// The pivot position `M`, the tie-break permutations, the prior draw, the
/// data draw and the chain noise come from disjoint child streams of
/// `stream`, so the rankings are independent of `M` by construction. The
/// states before the pivot are generated with the forward kernel, which has
/// the right law when the kernel is reversible.
pub fn rank_statistics<M, K>(
    model: &M,
    kernel: &K,
    config: &RankConfig,
    rankings: &[OrdinalRanking<M>],
    stream: RngStream,
) -> Result<Vec<usize>>
where
    M: GenerativeModel,
    K: KernelFamily<M>,
{
    require_reversible(kernel)?;
    config.validate()?;
    if rankings.is_empty() {
        return Err(invalid("rank test needs at least one ranking"));
    }
    let len = config.chain_length;
    let pivot = stream.role(Role::Pivot).random_range(0..len);
    let mut tie_rng = stream.role(Role::TieBreak);
    let ties: Vec<TieBreak> = rankings.iter().map(|_| TieBreak::draw(&mut tie_rng, len)).collect();

    let theta_pivot = model.sample_prior(&mut stream.role(Role::Prior));
    let y_pivot = model.sample_data(&mut stream.role(Role::Data), &theta_pivot);
    let mut chain = stream.role(Role::Chain);

    let mut states: Vec<Option<(M::Param, M::Data)>> = vec![None; len];
    states[pivot] = Some((theta_pivot.clone(), y_pivot.clone()));

    let arms: [Vec<usize>; 2] = [(0..pivot).rev().collect(), (pivot + 1..len).collect()];
    for arm in arms {
        let mut theta = theta_pivot.clone();
        let mut y = y_pivot.clone();
        let mut cache = kernel.prepare(&y);
        for slot in arm {
            for _ in 0..config.thinning {
                if config.joint_update_prob > 0.0 && chain.random::<f64>() < config.joint_update_prob {
                    y = model.sample_data(&mut chain, &theta);
                    cache = kernel.prepare(&y);
                } else {
                    theta = kernel.step(&mut chain, &y, &cache, &theta)?;
                }
            }
            states[slot] = Some((theta.clone(), y.clone()));
        }
    }
    let states: Vec<(M::Param, M::Data)> = states.into_iter().map(|s| s.expect("every slot filled")).collect();

    let mut scores = vec![0.0; len];
    rankings
        .iter()
        .zip(&ties)
        .map(|(ranking, tie)| {
            for (s, (theta, y)) in scores.iter_mut().zip(&states) {
                *s = ranking.score(theta, y);
            }
            if scores.iter().any(|v| !v.is_finite()) {
                return Err(Error::Kernel(format!("ranking '{}' produced a non-finite score", ranking.name())));
            }
            Ok(tie.rank(&scores, pivot))
        })
        .collect()
}

/// A single rank statistic in `1..=chain_length`.
pub fn rank_statistic<M, K>(
    model: &M,
    kernel: &K,
    config: &RankConfig,
    ranking: &OrdinalRanking<M>,
    stream: RngStream,
) -> Result<usize>
where
    M: GenerativeModel,
    K: KernelFamily<M>,
{
    Ok(rank_statistics(model, kernel, config, std::slice::from_ref(ranking), stream)?[0])
}

/// `n_reps` independent rank statistics per ranking, each histogram tested
/// for uniformity on `1..=chain_length` with the chi-square test.
pub fn rank_test<M, K>(
    model: &M,
    kernel: &K,
    config: &RankConfig,
    rankings: &[OrdinalRanking<M>],
    stream: RngStream,
) -> Result<PValueVector>
where
    M: GenerativeModel,
    K: KernelFamily<M>,
{
    require_reversible(kernel)?;
    config.validate()?;
    let ranks = replicate(config.n_reps, stream, |s| rank_statistics(model, kernel, config, rankings, s))?;

    let len = config.chain_length;
    let mut histograms = Vec::with_capacity(rankings.len());
    let mut p_values = Vec::with_capacity(rankings.len());
    for (r, ranking) in rankings.iter().enumerate() {
        let mut counts = vec![0u64; len];
        for rep in &ranks {
            counts[rep[r] - 1] += 1;
        }
        p_values.push(chi2_uniformity(&counts)?.p_value);
        histograms.push(Histogram {
            label: ranking.name().to_string(),
            bins: (1..=len).map(|b| b.to_string()).collect(),
            series: vec![HistogramSeries { name: "rank".into(), counts }],
        });
    }
    let mut out = PValueVector::new(
        rankings.iter().map(|r| r.name().to_string()).collect(),
        p_values,
        config.n_reps,
        (config.n_reps * (len - 1) * config.thinning) as u64,
    );
    out.histograms = histograms;
    Ok(out)
}
