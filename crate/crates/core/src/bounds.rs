//! Reference pseudo-regret upper bounds for Tsallis-INF.
//!
//! These are the closed-form guarantees for α = ½ with the `c/√t` learning
//! rate (adversarial and self-bounding regimes, for both estimators) and for
//! general α with the anytime adversarial learning rate. `log` is natural.

use crate::math;
use crate::tsallis::Estimator;
use crate::types::GapVector;
use crate::{Error, Result};

/// Adversarial bound for α = ½: `4√(KT)+1` (IW) or `2√(KT)+10K·log T+16` (RV).
pub fn adversarial_bound(arms: usize, horizon: f64, estimator: Estimator) -> f64 {
    let k = arms as f64;
    let root = math::sqrt(k * horizon);
    match estimator {
        Estimator::ImportanceWeighted => 4.0 * root + 1.0,
        Estimator::ReducedVariance => 2.0 * root + 10.0 * k * math::ln(horizon) + 16.0,
    }
}

/// The gap-dependent part of the self-bounding bound,
/// `Σ_{i≠i*} (a·log T + b)/Δᵢ + 1/Δ_min`.
///
/// Also the threshold on `C` where the bound switches from the additive form
/// to the `2√(B·C)` form.
pub fn self_bounding_gap_term(gaps: &GapVector, horizon: f64, estimator: Estimator) -> Result<f64> {
    let best = gaps.unique_optimum().ok_or(Error::NoUniqueOptimum)?;
    let min_gap = gaps.min_positive().ok_or(Error::NoUniqueOptimum)?;
    let (a, b) = match estimator {
        Estimator::ImportanceWeighted => (4.0, 12.0),
        Estimator::ReducedVariance => (1.0, 3.0),
    };
    let numerator = a * math::ln(horizon) + b;
    let sum = gaps
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != best)
        .fold(0.0, |acc, (_, gap)| acc + numerator / gap);
    Ok(sum + 1.0 / min_gap)
}

/// Bound under a `(Δ, C, T)` self-bounding constraint for α = ½.
///
/// For `C ≤ B` (see [`self_bounding_gap_term`]) this is `B + rest + C`,
/// otherwise `2√(B·C) + rest`, where `rest` is `4·log T + √K + 8` (IW) or
/// `28K·log T + √K + 32` (RV). The two forms agree at `C = B`.
pub fn self_bounding_bound(
    gaps: &GapVector,
    horizon: f64,
    corruption: f64,
    estimator: Estimator,
) -> Result<f64> {
    let gap_term = self_bounding_gap_term(gaps, horizon, estimator)?;
    let k = gaps.len() as f64;
    let log_t = math::ln(horizon);
    let rest = match estimator {
        Estimator::ImportanceWeighted => 4.0 * log_t + math::sqrt(k) + 8.0,
        Estimator::ReducedVariance => 28.0 * k * log_t + math::sqrt(k) + 32.0,
    };
    if corruption <= gap_term {
        Ok(gap_term + rest + corruption)
    } else {
        Ok(2.0 * math::sqrt(gap_term * corruption) + rest)
    }
}

/// Anytime adversarial bound for α-Tsallis-INF with symmetric regularizer and IW
/// estimates: `2√(min{1/(α−α²), log K/α, log T/(1−α)}·K·T) + 1`.
pub fn anytime_adversarial_bound(alpha: f64, arms: usize, horizon: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidConfig("alpha must lie in [0, 1]"));
    }
    let k = arms as f64;
    let first = if alpha > 0.0 && alpha < 1.0 {
        1.0 / (alpha - alpha * alpha)
    } else {
        f64::INFINITY
    };
    let second = if alpha > 0.0 {
        math::ln(k) / alpha
    } else {
        f64::INFINITY
    };
    let third = if alpha < 1.0 {
        math::ln(horizon) / (1.0 - alpha)
    } else {
        f64::INFINITY
    };
    let factor = first.min(second).min(third);
    Ok(2.0 * math::sqrt(factor * k * horizon) + 1.0)
}
