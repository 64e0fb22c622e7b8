//! Parallel repetitions and per-checkpoint aggregation.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::SimError;
use crate::run::{run_single, RunFailure, RunReport};

/// One row of the aggregate CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub algorithm: String,
    pub env: String,
    pub t: u64,
    pub mean_pseudo_regret: f64,
    /// Population standard deviation across runs.
    pub std_pseudo_regret: f64,
    pub n_runs: u64,
}

#[derive(Debug, Clone)]
pub struct BatchResult {
    /// Successful runs, grouped by algorithm in config order, then by seed.
    pub reports: Vec<RunReport>,
    pub failures: Vec<RunFailure>,
    pub aggregates: Vec<AggregateRow>,
}

impl BatchResult {
    /// Aggregate rows of one algorithm.
    pub fn rows_for<'a>(&'a self, algorithm: &'a str) -> impl Iterator<Item = &'a AggregateRow> {
        self.aggregates
            .iter()
            .filter(move |r| r.algorithm == algorithm)
    }

    /// Mean and population std at the last checkpoint of `algorithm`.
    pub fn final_stats(&self, algorithm: &str) -> Option<(f64, f64, u64)> {
        self.rows_for(algorithm)
            .last()
            .map(|r| (r.mean_pseudo_regret, r.std_pseudo_regret, r.n_runs))
    }

    /// Mean at round `t` for `algorithm`, if `t` is a checkpoint.
    pub fn mean_at(&self, algorithm: &str, t: u64) -> Option<f64> {
        self.rows_for(algorithm)
            .find(|r| r.t == t)
            .map(|r| r.mean_pseudo_regret)
    }
}

/// Runs every (algorithm, repetition) pair of `config`.
///
/// `threads = None` uses rayon's default. The output does not depend on the
/// thread count: each run owns its random streams and results are collected
/// in job order.
pub fn run_batch(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<BatchResult, SimError> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let jobs: Vec<(usize, u64)> = (0..config.algorithms.len())
        .flat_map(|a| (0..config.repetitions).map(move |r| (a, r)))
        .collect();
    let outcomes: Vec<Result<RunReport, RunFailure>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(a, r)| run_single(config, a, r))
            .collect()
    });
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => reports.push(r),
            Err(f) => failures.push(f),
        }
    }
    let aggregates = aggregate(config, &reports);
    Ok(BatchResult {
        reports,
        failures,
        aggregates,
    })
}

/// Exact per-checkpoint mean and population std, folded in seed order.
pub fn aggregate(config: &ExperimentConfig, reports: &[RunReport]) -> Vec<AggregateRow> {
    let env = config.env_id();
    let rounds = config.checkpoints.rounds(config.horizon);
    let mut rows = Vec::new();
    for alg in &config.algorithms {
        let id = alg.id();
        let traces: Vec<_> = reports
            .iter()
            .filter(|r| r.trace.algorithm() == id)
            .map(|r| r.trace.checkpoints())
            .collect();
        if traces.is_empty() {
            continue;
        }
        let n = traces.len() as f64;
        for (i, &t) in rounds.iter().enumerate() {
            let values = traces.iter().map(|c| c[i].1);
            let mean = values.clone().fold(0.0, |acc, v| acc + v) / n;
            let var = values.fold(0.0, |acc, v| acc + (v - mean) * (v - mean)) / n;
            rows.push(AggregateRow {
                algorithm: id.clone(),
                env: env.clone(),
                t,
                mean_pseudo_regret: mean,
                std_pseudo_regret: var.sqrt(),
                n_runs: traces.len() as u64,
            });
        }
    }
    rows
}
