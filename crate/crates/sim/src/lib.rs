//! Experiment harness for the Tsallis-INF bandit library: JSON configs,
//! seeded parallel repetitions, aggregation and CSV output.

pub mod batch;
pub mod config;
pub mod curves;
mod error;
pub mod oracle;
pub mod output;
pub mod rng;
pub mod run;

pub use batch::{run_batch, AggregateRow, BatchResult};
pub use config::{AlgorithmConfig, EnvConfig, ExperimentConfig};
pub use error::SimError;
pub use run::{run_single, RunFailure, RunReport};
