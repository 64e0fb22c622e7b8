//! Tsallis-INF multi-armed bandit learners and the machinery around them.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerical
//! parts: domain types, regret accounting, reference regret bounds, the
//! α-Tsallis-INF learner with its weight solvers and loss estimators, the
//! UCB1 / Thompson Sampling / EXP3 baselines, loss environments and the
//! Sparring dueling-bandit reduction. Configuration files, parallel
//! experiment runs and CSV output live in the `tsallis-sim` crate.
//!
//! Arms are indexed from `0` throughout.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod bounds;
pub mod dueling;
pub mod env;
mod error;
mod math;
pub mod policy;
pub mod regret;
pub mod tsallis;
pub mod types;

pub use error::{Error, Result};
pub use policy::Policy;
pub use regret::{CheckpointGrid, RegretTrace};
pub use tsallis::{Estimator, Schedule, TsallisConfig, TsallisLearner};
pub use types::{GapVector, LossEstimateVector, LossVector, WeightVector};
