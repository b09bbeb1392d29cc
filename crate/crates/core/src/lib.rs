//! Statistical unit tests for Monte Carlo and MCMC samplers.
//!
//! Two exact tests compare a sampler against the generative model it is meant
//! to invert: a two-sample test between fitted and direct draws, and a rank
//! test on chains started from an exact posterior draw. Either test can run
//! inside a sequential wrapper that bounds the overall false-rejection
//! probability while spending more effort only when the evidence is
//! ambiguous.

// Validation guards are written as negated comparisons so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dist;
pub mod error;
pub mod exact;
pub mod harness;
pub mod model;
pub mod models;
pub mod parallel;
pub mod report;
pub mod rng;
pub mod sequential;
pub mod stats;

pub use error::{Error, Result};
pub use exact::{rank_test, two_sample_test, PValueVector, RankConfig, TwoSampleConfig};
pub use model::{AssumeReversible, GenerativeModel, KernelFamily, OrdinalRanking, TestFunction, ValueKind};
pub use rng::{derive_substream, RngStream};
pub use sequential::{sequential_test, SequentialConfig, SequentialVerdict, Verdict};
