//! Within-model frequency updates and birth/death moves.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{categorical_unchecked, standard_normal, truncated_poisson_pmf};
use crate::error::Result;
use crate::model::KernelFamily;

use super::{open_unit, quad_form_pk, SinusoidModel, SinusoidState};

/// Share of the global proposal drawn from the Fourier bins; the rest is
/// uniform on `(0, pi)`.
const FOURIER_WEIGHT: f64 = 0.9;
/// Scale of the birth and death probabilities.
const MOVE_SCALE: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioVariant {
    /// The published ratio `r`.
    Erroneous,
    /// `(k + 1) r`.
    Corrected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveSet {
    /// Birth, death and both within-model kernels.
    ReversibleJump,
    /// Local random-walk frequency kernel only.
    Local,
    /// Global Fourier-based frequency kernel only.
    Global,
}

/// Independence proposal for one frequency built from the periodogram of the
/// zero-padded signal.
#[derive(Clone, Debug)]
pub struct GfkProposal {
    edges: Vec<(f64, f64)>,
    probs: Vec<f64>,
    n_pad: usize,
}

impl GfkProposal {
    pub fn new(y: &[f64], n_pad: usize) -> Self {
        let n_bins = n_pad / 2 + 1;
        let step = 2.0 * PI / n_pad as f64;
        let mut power: Vec<f64> = (0..n_bins)
            .map(|j| {
                let omega = step * j as f64;
                let (mut re, mut im) = (0.0, 0.0);
                for (t, v) in y.iter().enumerate() {
                    let (s, c) = (omega * t as f64).sin_cos();
                    re += v * c;
                    im -= v * s;
                }
                re * re + im * im
            })
            .collect();
        let total: f64 = power.iter().sum();
        if total > 0.0 && total.is_finite() {
            power.iter_mut().for_each(|p| *p /= total);
        } else {
            power = vec![1.0 / n_bins as f64; n_bins];
        }
        let edges = (0..n_bins)
            .map(|j| {
                let lo = ((2 * j) as f64 - 1.0) * PI / n_pad as f64;
                let hi = ((2 * j) as f64 + 1.0) * PI / n_pad as f64;
                (lo.max(0.0), hi.min(PI))
            })
            .collect();
        GfkProposal {
            edges,
            probs: power,
            n_pad,
        }
    }

    fn bin_of(&self, w: f64) -> usize {
        let j = (w * self.n_pad as f64 / (2.0 * PI) + 0.5).floor();
        (j.max(0.0) as usize).min(self.probs.len() - 1)
    }

    pub fn density(&self, w: f64) -> f64 {
        if !(w > 0.0 && w < PI) {
            return 0.0;
        }
        let j = self.bin_of(w);
        let (lo, hi) = self.edges[j];
        FOURIER_WEIGHT * self.probs[j] / (hi - lo) + (1.0 - FOURIER_WEIGHT) / PI
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if rng.random::<f64>() < FOURIER_WEIGHT {
            let j = categorical_unchecked(rng, &self.probs, 1.0);
            let (lo, hi) = self.edges[j];
            lo + open_unit(rng) * (hi - lo)
        } else {
            open_unit(rng) * PI
        }
    }

    /// Frequency interval of the most probable bin.
    pub fn modal_bin(&self) -> (f64, f64) {
        let j = self
            .probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(j, _)| j)
            .unwrap_or(0);
        self.edges[j]
    }
}

#[derive(Clone, Debug)]
pub struct SinusoidCache {
    pub proposal: GfkProposal,
}

/// Birth acceptance ratio for adding `w_new` to `w`, in the requested
/// variant. Zero when the enlarged design is singular.
pub fn birth_ratio(model: &SinusoidModel, y: &[f64], w: &[f64], w_new: f64, variant: RatioVariant) -> f64 {
    let p = model.params();
    let Some(q_k) = quad_form_pk(y, w, p.delta2) else {
        return 0.0;
    };
    let mut grown = w.to_vec();
    grown.push(w_new);
    let Some(q_k1) = quad_form_pk(y, &grown, p.delta2) else {
        return 0.0;
    };
    let k = w.len() as f64;
    let log_r = 0.5 * (p.n as f64 + p.v0) * ((p.gamma0 + q_k).ln() - (p.gamma0 + q_k1).ln())
        - (k + 1.0).ln()
        - (1.0 + p.delta2).ln();
    match variant {
        RatioVariant::Erroneous => log_r.exp(),
        RatioVariant::Corrected => (log_r + (k + 1.0).ln()).exp(),
    }
}

/// The sampler: birth/death moves mixed with local and global frequency
/// updates, or one within-model kernel on its own.
///
/// Birth and death are selected with probabilities
/// `0.25 min(1, p(k +/- 1) / p(k))` where `p` is the truncated Poisson prior
/// the sampler was designed for, whatever prior generated the data.
#[derive(Clone, Debug)]
pub struct RjKernel {
    model: SinusoidModel,
    ratio: RatioVariant,
    moves: MoveSet,
    move_pmf: Vec<f64>,
}

impl RjKernel {
    pub fn new(model: &SinusoidModel, ratio: RatioVariant, moves: MoveSet) -> Result<Self> {
        let p = model.params();
        Ok(RjKernel {
            model: model.clone(),
            ratio,
            moves,
            move_pmf: truncated_poisson_pmf(p.lambda, p.k_max)?,
        })
    }

    pub fn ratio(&self) -> RatioVariant {
        self.ratio
    }

    pub fn moves(&self) -> MoveSet {
        self.moves
    }

    pub fn birth_probability(&self, k: usize) -> f64 {
        if self.moves != MoveSet::ReversibleJump || k >= self.model.params().k_max {
            return 0.0;
        }
        MOVE_SCALE * (self.move_pmf[k + 1] / self.move_pmf[k]).min(1.0)
    }

    pub fn death_probability(&self, k: usize) -> f64 {
        if self.moves != MoveSet::ReversibleJump || k == 0 {
            return 0.0;
        }
        MOVE_SCALE * (self.move_pmf[k - 1] / self.move_pmf[k]).min(1.0)
    }

    fn log_target_delta(&self, y: &[f64], q_old: f64, w_new: &[f64]) -> f64 {
        let p = self.model.params();
        match quad_form_pk(y, w_new, p.delta2) {
            Some(q_new) => -0.5 * (p.n as f64 + p.v0) * ((p.gamma0 + q_new).ln() - (p.gamma0 + q_old).ln()),
            None => f64::NEG_INFINITY,
        }
    }

    /// Probability of accepting `w_i -> w_new` under the local kernel.
    pub fn lfk_acceptance(&self, y: &[f64], state: &SinusoidState, i: usize, w_new: f64) -> f64 {
        if !(w_new > 0.0 && w_new < PI) {
            return 0.0;
        }
        let Some(q_old) = quad_form_pk(y, &state.w, self.model.params().delta2) else {
            return 1.0;
        };
        let mut w = state.w.clone();
        w[i] = w_new;
        self.log_target_delta(y, q_old, &w).exp().min(1.0)
    }

    /// Probability of accepting `w_i -> w_new` under the global kernel.
    pub fn gfk_acceptance(&self, y: &[f64], cache: &SinusoidCache, state: &SinusoidState, i: usize, w_new: f64) -> f64 {
        if !(w_new > 0.0 && w_new < PI) {
            return 0.0;
        }
        let Some(q_old) = quad_form_pk(y, &state.w, self.model.params().delta2) else {
            return 1.0;
        };
        let mut w = state.w.clone();
        let w_old = w[i];
        w[i] = w_new;
        let log_a = self.log_target_delta(y, q_old, &w) + cache.proposal.density(w_old).ln()
            - cache.proposal.density(w_new).ln();
        log_a.exp().min(1.0)
    }

    pub fn lfk_step<R: Rng + ?Sized>(&self, rng: &mut R, y: &[f64], state: &SinusoidState) -> SinusoidState {
        if state.k() == 0 {
            return state.clone();
        }
        let i = rng.random_range(0..state.k());
        let w_new = state.w[i] + self.model.params().sigma_rw * standard_normal(rng);
        let a = self.lfk_acceptance(y, state, i, w_new);
        accept_replace(rng, state, i, w_new, a)
    }

    pub fn gfk_step<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        y: &[f64],
        cache: &SinusoidCache,
        state: &SinusoidState,
    ) -> SinusoidState {
        if state.k() == 0 {
            return state.clone();
        }
        let i = rng.random_range(0..state.k());
        let w_new = cache.proposal.sample(rng);
        let a = self.gfk_acceptance(y, cache, state, i, w_new);
        accept_replace(rng, state, i, w_new, a)
    }

    fn birth<R: Rng + ?Sized>(&self, rng: &mut R, y: &[f64], state: &SinusoidState) -> SinusoidState {
        let w_new = open_unit(rng) * PI;
        let pos = rng.random_range(0..=state.k());
        let r = birth_ratio(&self.model, y, &state.w, w_new, self.ratio);
        if rng.random::<f64>() < r.min(1.0) {
            let mut w = state.w.clone();
            w.insert(pos, w_new);
            SinusoidState::new(w)
        } else {
            state.clone()
        }
    }

    fn death<R: Rng + ?Sized>(&self, rng: &mut R, y: &[f64], state: &SinusoidState) -> SinusoidState {
        let i = rng.random_range(0..state.k());
        let mut w = state.w.clone();
        let removed = w.remove(i);
        let r = birth_ratio(&self.model, y, &w, removed, self.ratio);
        let a = if r > 0.0 { (1.0 / r).min(1.0) } else { 1.0 };
        if rng.random::<f64>() < a {
            SinusoidState::new(w)
        } else {
            state.clone()
        }
    }

    /// One application of the kernel.
    pub fn rj_step<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        y: &[f64],
        cache: &SinusoidCache,
        state: &SinusoidState,
    ) -> SinusoidState {
        match self.moves {
            MoveSet::Local => self.lfk_step(rng, y, state),
            MoveSet::Global => self.gfk_step(rng, y, cache, state),
            MoveSet::ReversibleJump => {
                let k = state.k();
                let b = self.birth_probability(k);
                let d = self.death_probability(k);
                let u: f64 = rng.random();
                if u < b {
                    self.birth(rng, y, state)
                } else if u < b + d {
                    self.death(rng, y, state)
                } else if rng.random::<bool>() {
                    self.lfk_step(rng, y, state)
                } else {
                    self.gfk_step(rng, y, cache, state)
                }
            }
        }
    }
}

fn accept_replace<R: Rng + ?Sized>(rng: &mut R, state: &SinusoidState, i: usize, w_new: f64, a: f64) -> SinusoidState {
    if a > 0.0 && rng.random::<f64>() < a {
        let mut w = state.w.clone();
        w[i] = w_new;
        SinusoidState::new(w)
    } else {
        state.clone()
    }
}

impl KernelFamily<SinusoidModel> for RjKernel {
    type Cache = SinusoidCache;

    fn prepare(&self, y: &Vec<f64>) -> SinusoidCache {
        SinusoidCache {
            proposal: GfkProposal::new(y, self.model.params().n_pad),
        }
    }

    fn step<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        y: &Vec<f64>,
        cache: &SinusoidCache,
        theta: &SinusoidState,
    ) -> Result<SinusoidState> {
        Ok(self.rj_step(rng, y, cache, theta))
    }

    fn declared_reversible(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::sinusoid::{KPrior, SinusoidParams};

    fn tone(n: usize, w: f64) -> Vec<f64> {
        (0..n).map(|t| (w * t as f64).cos()).collect()
    }

    #[test]
    fn proposal_integrates_to_one() {
        let y: Vec<f64> = (0..64).map(|t| (0.7 * t as f64).sin() + 0.2 * (2.1 * t as f64).cos()).collect();
        let g = GfkProposal::new(&y, 256);
        // Cell edges line up with the bin edges, so the midpoint rule is exact
        // up to rounding on the piecewise-constant density.
        let m = 512 * 200;
        let h = PI / m as f64;
        let integral: f64 = (0..m).map(|i| g.density((i as f64 + 0.5) * h) * h).sum();
        assert!((integral - 1.0).abs() < 1e-6, "{integral}");
    }

    #[test]
    fn pure_tone_mode() {
        let g = GfkProposal::new(&tone(64, PI / 2.0), 256);
        let (lo, hi) = g.modal_bin();
        assert!(lo <= PI / 2.0 && PI / 2.0 <= hi);
    }

    #[test]
    fn ratio_variants() {
        let model = SinusoidModel::new(SinusoidParams::with_length(8)).unwrap();
        let y = tone(8, 1.1);
        let e0 = birth_ratio(&model, &y, &[], 1.0, RatioVariant::Erroneous);
        let c0 = birth_ratio(&model, &y, &[], 1.0, RatioVariant::Corrected);
        assert!((e0 - c0).abs() <= 1e-12 * e0.abs());
        let e2 = birth_ratio(&model, &y, &[0.3, 2.0], 1.0, RatioVariant::Erroneous);
        let c2 = birth_ratio(&model, &y, &[0.3, 2.0], 1.0, RatioVariant::Corrected);
        assert!((c2 / e2 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn move_probabilities_at_edges() {
        let model = SinusoidModel::new(SinusoidParams::default()).unwrap();
        let k = RjKernel::new(&model, RatioVariant::Corrected, MoveSet::ReversibleJump).unwrap();
        assert_eq!(k.death_probability(0), 0.0);
        assert_eq!(k.birth_probability(31), 0.0);
        assert!(k.birth_probability(0) > 0.0);
        let local = RjKernel::new(&model, RatioVariant::Corrected, MoveSet::Local).unwrap();
        assert_eq!(local.birth_probability(2), 0.0);
    }

    #[test]
    fn proposing_current_point_is_accepted() {
        let model = SinusoidModel::new(SinusoidParams::default().with_prior(KPrior::Fixed(1))).unwrap();
        let k = RjKernel::new(&model, RatioVariant::Corrected, MoveSet::Global).unwrap();
        let y = tone(64, 1.3);
        let cache = k.prepare(&y);
        let s = SinusoidState::new(vec![0.9]);
        assert!((k.gfk_acceptance(&y, &cache, &s, 0, 0.9) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn local_proposal_outside_support() {
        let model = SinusoidModel::new(SinusoidParams::default().with_prior(KPrior::Fixed(1))).unwrap();
        let k = RjKernel::new(&model, RatioVariant::Corrected, MoveSet::Local).unwrap();
        let y = tone(64, 1.3);
        let s = SinusoidState::new(vec![0.01]);
        assert_eq!(k.lfk_acceptance(&y, &s, 0, -0.01), 0.0);
        assert_eq!(k.lfk_acceptance(&y, &s, 0, PI + 0.01), 0.0);
    }

    #[test]
    fn local_acceptance_formula() {
        let model = SinusoidModel::new(SinusoidParams::default().with_prior(KPrior::Fixed(2))).unwrap();
        let k = RjKernel::new(&model, RatioVariant::Corrected, MoveSet::Local).unwrap();
        let y = tone(64, 1.3);
        let a = SinusoidState::new(vec![1.25, 2.5]);
        let b = SinusoidState::new(vec![1.25, 2.52]);
        let expected = (model.target_log_density(&y, &b) - model.target_log_density(&y, &a)).exp().min(1.0);
        assert!((k.lfk_acceptance(&y, &a, 1, 2.52) - expected).abs() < 1e-12);
        let back = (model.target_log_density(&y, &a) - model.target_log_density(&y, &b)).exp().min(1.0);
        assert!((k.lfk_acceptance(&y, &b, 1, 2.5) - back).abs() < 1e-12);
    }
}
