//! Reference regret bounds evaluated on the checkpoint grid.

use serde::Serialize;
use tsallis_core::bounds::{adversarial_bound, anytime_adversarial_bound, self_bounding_bound};
use tsallis_core::{Estimator, Schedule};

use crate::config::{AlgorithmConfig, ExperimentConfig, Problem};
use crate::error::SimError;

type Curve = Box<dyn Fn(f64) -> Result<f64, SimError>>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub t: u64,
    pub bound_name: String,
    pub value: f64,
}

/// Bound curves for `config`, grouped by bound name.
///
/// Always the adversarial bounds for both estimators. With a unique optimal
/// arm also the self-bounding bounds, charged `2C` for a corruption budget
/// `C`; for a dueling problem these are doubled and computed from the
/// utility gaps. Each anytime-schedule learner adds its own curve.
pub fn reference_curves(config: &ExperimentConfig) -> Result<Vec<BoundRow>, SimError> {
    let problem = config.environment.to_problem()?;
    let arms = problem.arms();
    let gaps = problem.gaps()?;
    let rounds = config.checkpoints.rounds(config.horizon);
    let corruption = 2.0 * config.environment.corruption_budget().unwrap_or(0.0);
    let dueling = matches!(problem, Problem::Dueling(_));

    let mut curves: Vec<(String, Curve)> = Vec::new();
    for est in [Estimator::ImportanceWeighted, Estimator::ReducedVariance] {
        curves.push((
            format!("adversarial_{}", est.short_name()),
            Box::new(move |t| Ok(adversarial_bound(arms, t, est))),
        ));
    }
    if gaps.unique_optimum().is_some() {
        for est in [Estimator::ImportanceWeighted, Estimator::ReducedVariance] {
            let gaps = gaps.clone();
            let (name, scale) = if dueling {
                (format!("sparring_self_bounding_{}", est.short_name()), 2.0)
            } else {
                (format!("self_bounding_{}", est.short_name()), 1.0)
            };
            curves.push((
                name,
                Box::new(move |t| Ok(scale * self_bounding_bound(&gaps, t, corruption, est)?)),
            ));
        }
    }
    let mut alphas: Vec<f64> = Vec::new();
    for alg in &config.algorithms {
        if let AlgorithmConfig::Tsallis {
            alpha,
            schedule: Schedule::Anytime,
            ..
        } = alg
        {
            if !alphas.contains(alpha) {
                alphas.push(*alpha);
            }
        }
    }
    for alpha in alphas {
        curves.push((
            format!("anytime_a{alpha}"),
            Box::new(move |t| Ok(anytime_adversarial_bound(alpha, arms, t)?)),
        ));
    }

    let mut rows = Vec::with_capacity(curves.len() * rounds.len());
    for (name, f) in &curves {
        for &t in &rounds {
            rows.push(BoundRow {
                t,
                bound_name: name.clone(),
                value: f(t as f64)?,
            });
        }
    }
    Ok(rows)
}
