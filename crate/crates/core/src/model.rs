//! Generative models, data-indexed Markov kernels, test functions and
//! ordinal rankings.
//!
//! A [`GenerativeModel`] defines the joint law `prior(theta) * p(y | theta)`.
//! A [`KernelFamily`] is the sampler under test: for every data value `y` it
//! is a Markov kernel that should leave the posterior `pi(. | y)` invariant.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Continuous,
    Discrete,
}

/// Shape of the parameter space, for reporting and sanity checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSpace {
    /// Dimension, or the maximal dimension for trans-dimensional spaces.
    pub dimension: usize,
    pub kinds: Vec<ValueKind>,
}

pub trait GenerativeModel: Send + Sync {
    type Param: Clone + Send + Sync + fmt::Debug;
    type Data: Clone + Send + Sync + fmt::Debug;

    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Param;

    fn sample_data<R: Rng + ?Sized>(&self, rng: &mut R, theta: &Self::Param) -> Self::Data;

    fn log_prior(&self, _theta: &Self::Param) -> Option<f64> {
        None
    }

    fn log_likelihood(&self, _theta: &Self::Param, _y: &Self::Data) -> Option<f64> {
        None
    }

    fn param_space(&self) -> ParamSpace;
}

/// The sampler under test, `{K_y}`.
///
/// `prepare` builds per-data state (for example a Fourier table of `y`) once
/// per chain; `step` must be a pure function of the generator state, `y`, the
/// prepared cache and the current parameter.
pub trait KernelFamily<M: GenerativeModel>: Send + Sync {
    type Cache: Send;

    fn prepare(&self, y: &M::Data) -> Self::Cache;

    fn step<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        y: &M::Data,
        cache: &Self::Cache,
        theta: &M::Param,
    ) -> Result<M::Param>;

    /// Whether the author asserts that every `K_y` is reversible with respect
    /// to `pi(. | y)`. The rank test refuses kernels that do not.
    fn declared_reversible(&self) -> bool {
        false
    }
}

/// Overrides a kernel's reversibility declaration.
///
/// The rank test is only exact for reversible kernels. Wrapping a kernel in
/// `AssumeReversible` is an explicit statement by the caller, typically to
/// show what the test reports for a kernel that is invariant but not
/// reversible.
#[derive(Clone, Debug)]
pub struct AssumeReversible<K>(pub K);

impl<M: GenerativeModel, K: KernelFamily<M>> KernelFamily<M> for AssumeReversible<K> {
    type Cache = K::Cache;

    fn prepare(&self, y: &M::Data) -> Self::Cache {
        self.0.prepare(y)
    }

    fn step<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        y: &M::Data,
        cache: &Self::Cache,
        theta: &M::Param,
    ) -> Result<M::Param> {
        self.0.step(rng, y, cache, theta)
    }

    fn declared_reversible(&self) -> bool {
        true
    }
}

type ScoreFn<M> =
    Arc<dyn Fn(&<M as GenerativeModel>::Param, &<M as GenerativeModel>::Data) -> f64 + Send + Sync>;

/// A real-valued function of `(theta, y)` compared between samples.
pub struct TestFunction<M: GenerativeModel> {
    name: String,
    kind: ValueKind,
    eval: ScoreFn<M>,
}

impl<M: GenerativeModel> Clone for TestFunction<M> {
    fn clone(&self) -> Self {
        TestFunction {
            name: self.name.clone(),
            kind: self.kind,
            eval: Arc::clone(&self.eval),
        }
    }
}

impl<M: GenerativeModel> fmt::Debug for TestFunction<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .finish()
    }
}

impl<M: GenerativeModel> TestFunction<M> {
    pub fn new(
        name: impl Into<String>,
        kind: ValueKind,
        eval: impl Fn(&M::Param, &M::Data) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TestFunction {
            name: name.into(),
            kind,
            eval: Arc::new(eval),
        }
    }

    pub fn continuous(
        name: impl Into<String>,
        eval: impl Fn(&M::Param, &M::Data) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, ValueKind::Continuous, eval)
    }

    pub fn discrete(
        name: impl Into<String>,
        eval: impl Fn(&M::Param, &M::Data) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, ValueKind::Discrete, eval)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    #[inline]
    pub fn evaluate(&self, theta: &M::Param, y: &M::Data) -> f64 {
        (self.eval)(theta, y)
    }
}

/// An ordinal ranking built from a score `h(theta, y)`: states are ordered by
/// score and ties are broken by an independent uniformly random permutation.
pub struct OrdinalRanking<M: GenerativeModel> {
    name: String,
    score: ScoreFn<M>,
}

impl<M: GenerativeModel> Clone for OrdinalRanking<M> {
    fn clone(&self) -> Self {
        OrdinalRanking {
            name: self.name.clone(),
            score: Arc::clone(&self.score),
        }
    }
}

impl<M: GenerativeModel> fmt::Debug for OrdinalRanking<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrdinalRanking").field("name", &self.name).finish()
    }
}

impl<M: GenerativeModel> OrdinalRanking<M> {
    pub fn new(
        name: impl Into<String>,
        score: impl Fn(&M::Param, &M::Data) -> f64 + Send + Sync + 'static,
    ) -> Self {
        OrdinalRanking {
            name: name.into(),
            score: Arc::new(score),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn score(&self, theta: &M::Param, y: &M::Data) -> f64 {
        (self.score)(theta, y)
    }
}

impl<M: GenerativeModel> From<&TestFunction<M>> for OrdinalRanking<M> {
    fn from(f: &TestFunction<M>) -> Self {
        OrdinalRanking {
            name: f.name.clone(),
            score: Arc::clone(&f.eval),
        }
    }
}

/// A uniformly random permutation used to order tied scores.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieBreak(Vec<u32>);

impl TieBreak {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        let mut keys: Vec<u32> = (0..len as u32).collect();
        keys.shuffle(rng);
        TieBreak(keys)
    }

    /// Break ties by position, first index lowest.
    pub fn identity(len: usize) -> Self {
        TieBreak((0..len as u32).collect())
    }

    pub fn from_keys(keys: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; keys.len()];
        for &k in &keys {
            let slot = seen
                .get_mut(k as usize)
                .ok_or_else(|| invalid("tie-break keys must be a permutation of 0..n"))?;
            if *slot {
                return Err(invalid("tie-break keys must be a permutation of 0..n"));
            }
            *slot = true;
        }
        Ok(TieBreak(keys))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based rank of entry `pivot` of `values`.
    pub fn rank(&self, values: &[f64], pivot: usize) -> usize {
        debug_assert_eq!(values.len(), self.0.len());
        let v = values[pivot];
        let key = self.0[pivot];
        1 + values
            .iter()
            .zip(&self.0)
            .filter(|(w, k)| match w.total_cmp(&v) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => **k < key,
                std::cmp::Ordering::Greater => false,
            })
            .count()
    }

    /// Ranks of every entry. Always a permutation of `1..=n`.
    pub fn ranks(&self, values: &[f64]) -> Vec<usize> {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(self.0[a].cmp(&self.0[b])));
        let mut ranks = vec![0; values.len()];
        for (r, i) in order.into_iter().enumerate() {
            ranks[i] = r + 1;
        }
        ranks
    }
}

/// Rank (1-based) of `values[pivot]` under the ordinal ranking that sorts by
/// value and breaks ties with a permutation drawn from `tie_rng`.
///
/// `pivot` is a 0-based index. `tie_rng` must not be the generator that chose
/// the pivot.
pub fn rank_of_pivot<R: Rng + ?Sized>(values: &[f64], pivot: usize, tie_rng: &mut R) -> Result<usize> {
    if pivot >= values.len() {
        return Err(invalid(format!("pivot {pivot} out of range for {} values", values.len())));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(invalid("rank_of_pivot needs finite values"));
    }
    Ok(TieBreak::draw(tie_rng, values.len()).rank(values, pivot))
}
