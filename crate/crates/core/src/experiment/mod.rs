//! Named, reproducible experiments and their reports.
//!
//! Replicate `r` of sampling task `t` draws from the stream
//! `child_stream(child_seed(seed, t), r)`, so results do not depend on the
//! number of worker threads. A run whose verdicts are not all passing is
//! repeated once with the seed `child_seed(seed, u64::MAX)`.

mod config;
mod report;
mod runs;

pub use config::{ExperimentConfig, ExperimentName, OutputFormat, BERN1_BIAS_TARGET, BERN_BIAS_TARGET};
pub use report::{
    emit_report, parse_report, round_sig, write_report, ExperimentReport, Reference, Summary, TestRecord,
};

use std::time::Instant;

use rayon::prelude::*;

use crate::error::Result;
use crate::rng::{child_seed, child_stream, Stream};

/// Parallel replicates, returned in replicate order.
pub(crate) fn replicate<T, F>(seed: u64, task: u64, reps: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut Stream) -> Result<T> + Sync + Send,
{
    let master = child_seed(seed, task);
    (0..reps)
        .into_par_iter()
        .map(|r| f(&mut child_stream(master, r)))
        .collect()
}

/// Everything an experiment body returns.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub references: Vec<Reference>,
    pub summaries: Vec<Summary>,
    pub tests: Vec<TestRecord>,
}

/// One attempt at a fixed seed, without the retry.
pub fn run_once(config: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    config.validate()?;
    let outcome = runs::dispatch(config, seed)?;
    let passed = outcome.tests.iter().all(TestRecord::passed);
    Ok(ExperimentReport {
        experiment: config.experiment,
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        effective_seed: seed,
        retried: seed != config.seed,
        config: config.clone(),
        references: outcome.references,
        summaries: outcome.summaries,
        tests: outcome.tests,
        passed,
        wall_clock_seconds: None,
    })
}

/// Seed of the single retry.
pub fn retry_seed(seed: u64) -> u64 {
    child_seed(seed, u64::MAX)
}

/// Validates the configuration, runs the experiment and, if any verdict
/// fails, runs it once more with a fresh seed. The second report is final.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut report = run_once(config, config.seed)?;
    if !report.passed {
        report = run_once(config, retry_seed(config.seed))?;
    }
    report.wall_clock_seconds = round_sig(start.elapsed().as_secs_f64());
    Ok(report)
}
