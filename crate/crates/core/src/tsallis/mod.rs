//! The α-Tsallis-INF learner: online mirror descent over the simplex with a
//! (possibly asymmetric) Tsallis-entropy regularizer.
//!
//! Each round the learner computes
//! `wₜ = argmax_w ⟨w, −L̂ₜ₋₁⟩ + (1/ηₜ)·Σᵢ (wᵢ^α − αwᵢ)/(α(1−α)ξᵢ)`,
//! samples an arm from `wₜ`, and adds an unbiased estimate of the loss vector
//! to `L̂`. α = ½ with `ξ = 1` is the practical configuration and uses a
//! warm-started Newton solver; every other α goes through bisection.

pub mod estimator;
pub mod rate;
pub mod solver;

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

pub use estimator::{iw_estimate, rv_estimate, Estimator};
pub use rate::learning_rate;
pub use solver::{newton_weights_half, solve_weights_general};

use crate::math;
use crate::policy::Policy;
use crate::types::{GapVector, LossEstimateVector, WeightVector};
use crate::{Error, Result};

/// Learning-rate schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Schedule {
    /// α = ½ only: `2/√t` with IW estimates, `4/√t` with RV estimates.
    InverseSqrt,
    /// Anytime adversarial rate for any α with symmetric regularization.
    Anytime,
    /// Gap-tuned rate paired with `ξᵢ = Δᵢ^{1−2α}`; needs the true gaps.
    GapOracle,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct TsallisConfig {
    pub alpha: f64,
    pub estimator: Estimator,
    pub schedule: Schedule,
    /// Regularizer asymmetry; all ones when absent. Ignored by [`Schedule::GapOracle`],
    /// which derives `ξ` from `oracle_gaps`.
    #[cfg_attr(feature = "serde", serde(default))]
    pub xi: Option<Vec<f64>>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub oracle_gaps: Option<GapVector>,
}

impl TsallisConfig {
    /// α = ½, symmetric, `c/√t` learning rate.
    pub fn half(estimator: Estimator) -> Self {
        Self {
            alpha: 0.5,
            estimator,
            schedule: Schedule::InverseSqrt,
            xi: None,
            oracle_gaps: None,
        }
    }

    /// Symmetric regularizer with the anytime adversarial rate and IW estimates.
    pub fn anytime(alpha: f64) -> Self {
        Self {
            alpha,
            estimator: Estimator::ImportanceWeighted,
            schedule: Schedule::Anytime,
            xi: None,
            oracle_gaps: None,
        }
    }

    /// Asymmetric regularizer tuned with the true gaps, IW estimates.
    pub fn gap_oracle(alpha: f64, gaps: GapVector) -> Self {
        Self {
            alpha,
            estimator: Estimator::ImportanceWeighted,
            schedule: Schedule::GapOracle,
            xi: None,
            oracle_gaps: Some(gaps),
        }
    }

    /// Checks the configuration for `arms` arms and returns the effective `ξ`.
    pub fn resolve_xi(&self, arms: usize) -> Result<Vec<f64>> {
        if arms == 0 {
            return Err(Error::InvalidConfig("need at least one arm"));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidConfig("alpha must lie in [0, 1]"));
        }
        if self.estimator == Estimator::ReducedVariance && self.alpha != 0.5 {
            return Err(Error::InvalidConfig(
                "the RV estimator requires alpha = 0.5",
            ));
        }
        match self.schedule {
            Schedule::InverseSqrt if self.alpha != 0.5 => Err(Error::InvalidConfig(
                "the inverse-sqrt schedule requires alpha = 0.5",
            )),
            Schedule::GapOracle => {
                let gaps = self.oracle_gaps.as_ref().ok_or(Error::InvalidConfig(
                    "gap-oracle schedule needs oracle gaps",
                ))?;
                if gaps.len() != arms {
                    return Err(Error::ArmCountMismatch {
                        expected: arms,
                        got: gaps.len(),
                    });
                }
                rate::oracle_xi(self.alpha, gaps)
            }
            _ => match &self.xi {
                None => Ok(vec![1.0; arms]),
                Some(xi) if xi.len() != arms => Err(Error::ArmCountMismatch {
                    expected: arms,
                    got: xi.len(),
                }),
                Some(xi) if xi.iter().any(|x| !(x.is_finite() && *x > 0.0)) => {
                    Err(Error::InvalidConfig("xi must be finite and positive"))
                }
                Some(xi) => Ok(xi.clone()),
            },
        }
    }
}

/// State of one α-Tsallis-INF run.
#[derive(Debug, Clone)]
pub struct TsallisLearner {
    config: TsallisConfig,
    xi: Vec<f64>,
    newton: bool,
    cum_estimates: Vec<f64>,
    t: u64,
    warm_x: Option<f64>,
    last_step: f64,
    last_weights: Option<WeightVector>,
}

impl TsallisLearner {
    pub fn new(config: TsallisConfig, arms: usize) -> Result<Self> {
        let xi = config.resolve_xi(arms)?;
        let newton = config.alpha == 0.5 && xi.iter().all(|&x| x == 1.0);
        Ok(Self {
            config,
            xi,
            newton,
            cum_estimates: vec![0.0; arms],
            t: 0,
            warm_x: None,
            last_step: 0.0,
            last_weights: None,
        })
    }

    pub fn config(&self) -> &TsallisConfig {
        &self.config
    }

    pub fn arms(&self) -> usize {
        self.cum_estimates.len()
    }

    /// Number of completed rounds.
    pub fn round(&self) -> u64 {
        self.t
    }

    /// `L̂ₜ`.
    pub fn cum_estimates(&self) -> &[f64] {
        &self.cum_estimates
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Normalizer kept for warm-starting the α = ½ Newton solver.
    pub fn warm_x(&self) -> Option<f64> {
        self.warm_x
    }

    /// Learning rate of the upcoming round.
    pub fn current_rate(&self) -> Result<f64> {
        learning_rate(&self.config, self.arms(), self.t + 1)
    }

    /// Sampling distribution for the upcoming round.
    pub fn weights(&mut self) -> Result<WeightVector> {
        let eta = self.current_rate()?;
        if eta == 0.0 {
            // First round of a schedule with η₁ = 0: L̂₀ = 0, so the iterate is
            // the regularizer's minimizer.
            return solve_weights_general(self.config.alpha, 0.0, &self.xi, &self.cum_estimates);
        }
        if self.newton {
            let mut warm = self.warm_x;
            if let Some(x) = warm {
                if x >= math::min(&self.cum_estimates) {
                    warm = Some(x - self.last_step);
                }
            } else {
                warm = Some(-2.0 * math::sqrt(self.arms() as f64) / eta);
            }
            let (w, x) = newton_weights_half(&self.cum_estimates, eta, warm)?;
            self.warm_x = Some(x);
            Ok(w)
        } else {
            solve_weights_general(self.config.alpha, eta, &self.xi, &self.cum_estimates)
        }
    }

    /// Computes this round's distribution and samples an arm from it with one
    /// uniform draw `u ∈ [0, 1)`.
    pub fn select_with_uniform(&mut self, u: f64) -> Result<(usize, WeightVector)> {
        let w = self.weights()?;
        let arm = w.sample(u);
        self.last_weights = Some(w.clone());
        Ok((arm, w))
    }

    pub fn select_arm(&mut self, rng: &mut dyn RngCore) -> Result<(usize, WeightVector)> {
        let u: f64 = rng.random();
        self.select_with_uniform(u)
    }

    /// Loss estimate this round would add for `chosen` and `loss` under `w_used`.
    pub fn estimate(
        &self,
        chosen: usize,
        loss: f64,
        w_used: &WeightVector,
    ) -> Result<LossEstimateVector> {
        let eta = self.current_rate()?;
        estimator::estimate(self.config.estimator, chosen, loss, w_used, eta)
    }

    /// Adds the round's loss estimate to `L̂` and advances the round counter.
    /// `w_used` must be the distribution `chosen` was drawn from.
    pub fn update(&mut self, chosen: usize, loss: f64, w_used: &WeightVector) -> Result<()> {
        if w_used.len() != self.arms() {
            return Err(Error::ArmCountMismatch {
                expected: self.arms(),
                got: w_used.len(),
            });
        }
        let est = self.estimate(chosen, loss, w_used)?;
        let mut step: f64 = 0.0;
        for (acc, e) in self.cum_estimates.iter_mut().zip(est.as_slice()) {
            *acc += e;
            step = step.max(e.abs());
        }
        self.last_step = step;
        self.t += 1;
        Ok(())
    }
}

impl Policy for TsallisLearner {
    fn arms(&self) -> usize {
        self.cum_estimates.len()
    }

    fn select(&mut self, rng: &mut dyn RngCore) -> Result<usize> {
        self.select_arm(rng).map(|(arm, _)| arm)
    }

    fn observe(&mut self, arm: usize, loss: f64, _rng: &mut dyn RngCore) -> Result<()> {
        let w = self
            .last_weights
            .take()
            .ok_or(Error::InvalidConfig("observe called before select"))?;
        self.update(arm, loss, &w)
    }
}
