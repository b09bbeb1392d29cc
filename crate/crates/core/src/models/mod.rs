//! Benchmark models with correct and deliberately broken samplers.

pub mod gaussian;
pub mod sinusoid;
pub mod toy;
