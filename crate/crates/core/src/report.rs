//! Self-describing JSON reports.

use std::io::Write;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Everything needed to rerun a command and compare outputs. Re-running with
/// `config` and `seed` reproduces `result` exactly; only `wall_clock_seconds`
/// changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: Value,
    pub result: Value,
    pub wall_clock_seconds: f64,
}

impl Report {
    pub fn new<C: Serialize, R: Serialize>(command: &str, seed: u64, config: &C, result: &R, elapsed: Duration) -> Result<Self> {
        Ok(Report {
            schema_version: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            config: serde_json::to_value(config)?,
            result: serde_json::to_value(result)?,
            wall_clock_seconds: elapsed.as_secs_f64(),
        })
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }
}
