//! CSV and metadata writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::batch::{AggregateRow, BatchResult};
use crate::config::ExperimentConfig;
use crate::curves::BoundRow;
use crate::error::SimError;
use crate::run::RunReport;

pub const RAW_HEADER: &str = "algorithm,env,seed,t,pseudo_regret";
pub const AGGREGATE_HEADER: &str = "algorithm,env,t,mean_pseudo_regret,std_pseudo_regret,n_runs";
pub const BOUNDS_HEADER: &str = "t,bound_name,value";

#[derive(Serialize)]
struct RawRow<'a> {
    algorithm: &'a str,
    env: &'a str,
    seed: u64,
    t: u64,
    pseudo_regret: f64,
}

fn write_rows<W: Write, R: Serialize>(
    out: W,
    header: &str,
    rows: impl IntoIterator<Item = R>,
) -> Result<(), SimError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(header.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// One row per (run, checkpoint).
pub fn write_raw<W: Write>(out: W, reports: &[RunReport]) -> Result<(), SimError> {
    let rows = reports.iter().flat_map(|r| {
        r.trace.checkpoints().iter().map(move |&(t, v)| RawRow {
            algorithm: r.trace.algorithm(),
            env: r.trace.environment(),
            seed: r.trace.seed(),
            t,
            pseudo_regret: v,
        })
    });
    write_rows(out, RAW_HEADER, rows)
}

pub fn write_aggregate<W: Write>(out: W, rows: &[AggregateRow]) -> Result<(), SimError> {
    write_rows(out, AGGREGATE_HEADER, rows)
}

pub fn write_bounds<W: Write>(out: W, rows: &[BoundRow]) -> Result<(), SimError> {
    write_rows(out, BOUNDS_HEADER, rows)
}

#[derive(Debug, Serialize)]
pub struct Metadata<'a> {
    pub tool_version: &'static str,
    pub env: String,
    pub horizon: u64,
    pub repetitions: u64,
    pub base_seed: u64,
    /// How `std_pseudo_regret` is computed.
    pub std_pseudo_regret: &'static str,
    pub failures: Vec<String>,
    pub config: &'a ExperimentConfig,
}

pub const STD_NOTE: &str =
    "population standard deviation of the per-run pseudo-regret (spread of the distribution, not the standard error of the mean)";

fn create(path: &Path) -> Result<BufWriter<File>, SimError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| SimError::Io {
            path: path.to_owned(),
            source,
        })
}

/// Files written by [`write_batch`].
#[derive(Debug, Clone)]
pub struct WrittenFiles {
    pub raw: PathBuf,
    pub aggregate: PathBuf,
    pub metadata: PathBuf,
}

/// Writes `<stem>_regret.csv`, `<stem>_aggregate.csv` and `<stem>_metadata.json` into `dir`.
pub fn write_batch(
    dir: &Path,
    stem: &str,
    config: &ExperimentConfig,
    result: &BatchResult,
) -> Result<WrittenFiles, SimError> {
    std::fs::create_dir_all(dir).map_err(|source| SimError::Io {
        path: dir.to_owned(),
        source,
    })?;
    let files = WrittenFiles {
        raw: dir.join(format!("{stem}_regret.csv")),
        aggregate: dir.join(format!("{stem}_aggregate.csv")),
        metadata: dir.join(format!("{stem}_metadata.json")),
    };
    write_raw(create(&files.raw)?, &result.reports)?;
    write_aggregate(create(&files.aggregate)?, &result.aggregates)?;
    let meta = Metadata {
        tool_version: env!("CARGO_PKG_VERSION"),
        env: config.env_id(),
        horizon: config.horizon,
        repetitions: config.repetitions,
        base_seed: config.base_seed,
        std_pseudo_regret: STD_NOTE,
        failures: result.failures.iter().map(ToString::to_string).collect(),
        config,
    };
    let mut out = create(&files.metadata)?;
    serde_json::to_writer_pretty(&mut out, &meta)?;
    writeln!(out)
        .and_then(|()| out.flush())
        .map_err(|source| SimError::Io {
            path: files.metadata.clone(),
            source,
        })?;
    Ok(files)
}
