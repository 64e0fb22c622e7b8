//! Learning-rate schedules.

use alloc::vec::Vec;
use core::f64::consts::E;

use super::{Estimator, Schedule, TsallisConfig};
use crate::math;
use crate::types::GapVector;
use crate::{Error, Result};

/// `η_t` for round `t ≥ 1`.
pub fn learning_rate(config: &TsallisConfig, arms: usize, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::InvalidConfig("rounds are numbered from 1"));
    }
    if !(0.0..=1.0).contains(&config.alpha) {
        return Err(Error::InvalidConfig("alpha must lie in [0, 1]"));
    }
    match config.schedule {
        Schedule::InverseSqrt => Ok(inverse_sqrt_rate(config.estimator, t)),
        Schedule::Anytime => Ok(anytime_rate(config.alpha, arms, t)),
        Schedule::GapOracle => {
            if config.oracle_gaps.is_none() {
                return Err(Error::InvalidConfig(
                    "gap-oracle schedule needs oracle gaps",
                ));
            }
            Ok(gap_oracle_rate(config.alpha, t))
        }
    }
}

/// `2/√t` for IW estimates, `4/√t` for RV estimates (α = ½).
pub fn inverse_sqrt_rate(estimator: Estimator, t: u64) -> f64 {
    let scale = match estimator {
        Estimator::ImportanceWeighted => 2.0,
        Estimator::ReducedVariance => 4.0,
    };
    scale / math::sqrt(t as f64)
}

/// `√((K^{1−2α} − K^{−α})/(1−α) · (1 − t^{−α})/(α t))`, with the analytic limits
/// `√((K−1)·log t / t)` at α = 0 and `√(log K·(1 − 1/t)/t)` at α = 1.
///
/// Zero at `t = 1` for every α. The α = 1 value is the stated limit; the
/// interior formula itself tends to `√(log K/K·(1 − 1/t)/t)` as α → 1, which is
/// smaller by a factor `√K`.
pub fn anytime_rate(alpha: f64, arms: usize, t: u64) -> f64 {
    let k = arms as f64;
    let t = t as f64;
    let log_k = math::ln(k);
    let log_t = math::ln(t);
    let squared = if alpha == 0.0 {
        (k - 1.0) * log_t / t
    } else if alpha == 1.0 {
        log_k * (1.0 - 1.0 / t) / t
    } else {
        // expm1 keeps both ratios accurate as α approaches 0 or 1.
        let arm_part = math::powf(k, -alpha) * math::expm1((1.0 - alpha) * log_k) / (1.0 - alpha);
        let time_part = -math::expm1(-alpha * log_t) / (alpha * t);
        arm_part * time_part
    };
    math::sqrt(squared.max(0.0))
}

/// `(16/t)^α · (1 − t̄^{α−1}) / (4(1−α))` with `t̄ = max{e, t}`; the α = 1 limit
/// is `4·log(t̄)/t`.
///
/// The closed form is reconstructed from the stability analysis of the
/// gap-tuned asymmetric regularizer rather than stated explicitly, and is
/// paired with the `ξ` of [`oracle_xi`].
pub fn gap_oracle_rate(alpha: f64, t: u64) -> f64 {
    let t = t as f64;
    let log_tbar = math::ln(t.max(E));
    let ratio = if alpha == 1.0 {
        log_tbar
    } else {
        -math::expm1((alpha - 1.0) * log_tbar) / (1.0 - alpha)
    };
    math::powf(16.0 / t, alpha) * ratio / 4.0
}

/// `ξᵢ = Δᵢ^{1−2α}` for suboptimal arms and `Δ_min^{1−2α}` for the optimal arm.
pub fn oracle_xi(alpha: f64, gaps: &GapVector) -> Result<Vec<f64>> {
    let best = gaps.unique_optimum().ok_or(Error::NoUniqueOptimum)?;
    let min_gap = gaps.min_positive().ok_or(Error::NoUniqueOptimum)?;
    let exponent = 1.0 - 2.0 * alpha;
    Ok(gaps
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &gap)| {
            let gap = if i == best { min_gap } else { gap };
            math::powf(gap, exponent)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn inverse_sqrt_examples() {
        let iw = TsallisConfig::half(Estimator::ImportanceWeighted);
        assert_eq!(learning_rate(&iw, 2, 1).unwrap(), 2.0);
        let rv = TsallisConfig::half(Estimator::ReducedVariance);
        assert_eq!(learning_rate(&rv, 2, 4).unwrap(), 2.0);
    }

    #[test]
    fn anytime_alpha_one_limit() {
        let cfg = TsallisConfig::anytime(1.0);
        let eta = learning_rate(&cfg, 2, 2).unwrap();
        let expected = libm::sqrt(libm::log(2.0) * 0.5 / 2.0);
        assert!((eta - expected).abs() < 1e-15);
        assert!((eta - 0.41628).abs() < 1e-5);
    }

    #[test]
    fn anytime_is_zero_in_first_round() {
        for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
            assert_eq!(anytime_rate(alpha, 4, 1), 0.0);
        }
    }

    #[test]
    fn anytime_interior_approaches_limits() {
        for t in [2, 10, 1000] {
            let near0 = anytime_rate(1e-9, 5, t);
            assert!((near0 - anytime_rate(0.0, 5, t)).abs() < 1e-6);
            let near1 = anytime_rate(1.0 - 1e-9, 5, t);
            assert!((near1 - anytime_rate(1.0, 5, t) / libm::sqrt(5.0)).abs() < 1e-6);
        }
    }

    #[test]
    fn anytime_half_matches_direct_formula() {
        let (k, t) = (4.0_f64, 9.0_f64);
        let direct =
            libm::sqrt((k.powf(0.0) - k.powf(-0.5)) / 0.5 * (1.0 - t.powf(-0.5)) / (0.5 * t));
        assert!((anytime_rate(0.5, 4, 9) - direct).abs() < 1e-15);
    }

    #[test]
    fn gap_oracle_rate_and_limits() {
        // α = ½, t = 16: (16/16)^½ · (1 − 16^{−½}) / (4·½) = 0.375.
        assert!((gap_oracle_rate(0.5, 16) - 0.375).abs() < 1e-15);
        // t̄ = e for t ≤ 2.
        let at1 = gap_oracle_rate(0.5, 1);
        assert!((at1 - 4.0 * (1.0 - libm::exp(-0.5)) / 2.0).abs() < 1e-15);
        let near1 = gap_oracle_rate(1.0 - 1e-9, 50);
        assert!((near1 - gap_oracle_rate(1.0, 50)).abs() < 1e-6);
    }

    #[test]
    fn oracle_xi_uses_min_gap_for_best_arm() {
        let gaps = GapVector::new(vec![0.25, 0.0, 0.5]).unwrap();
        let xi = oracle_xi(0.0, &gaps).unwrap();
        assert_eq!(xi, vec![0.25, 0.25, 0.5]);
        let xi = oracle_xi(0.5, &gaps).unwrap();
        assert_eq!(xi, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn gap_oracle_schedule_requires_gaps() {
        let mut cfg = TsallisConfig::anytime(0.3);
        cfg.schedule = Schedule::GapOracle;
        assert!(learning_rate(&cfg, 3, 1).is_err());
        assert!(learning_rate(&TsallisConfig::anytime(0.3), 3, 0).is_err());
    }
}
