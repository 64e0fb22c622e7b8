//! Unbiased loss estimators built from the single observed loss.

use alloc::vec;
use alloc::vec::Vec;

use crate::types::{LossEstimateVector, WeightVector};
use crate::{Error, Result};

/// Which loss estimator feeds the cumulative estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Estimator {
    /// `ℓ̂ᵢ = 1{I=i}·ℓᵢ / wᵢ`.
    #[cfg_attr(feature = "serde", serde(rename = "iw"))]
    ImportanceWeighted,
    /// `ℓ̂ᵢ = 1{I=i}·(ℓᵢ − Bᵢ)/wᵢ + Bᵢ` with baseline `Bᵢ = ½·1{wᵢ ≥ η²}`.
    #[cfg_attr(feature = "serde", serde(rename = "rv"))]
    ReducedVariance,
}

impl Estimator {
    pub fn short_name(self) -> &'static str {
        match self {
            Estimator::ImportanceWeighted => "iw",
            Estimator::ReducedVariance => "rv",
        }
    }
}

fn check(chosen: usize, loss: f64, w: &WeightVector) -> Result<()> {
    if chosen >= w.len() {
        return Err(Error::ArmOutOfRange {
            arm: chosen,
            arms: w.len(),
        });
    }
    if !(0.0..=1.0).contains(&loss) {
        return Err(Error::InvalidLoss(loss));
    }
    Ok(())
}

pub fn iw_estimate(chosen: usize, loss: f64, w: &WeightVector) -> Result<LossEstimateVector> {
    check(chosen, loss, w)?;
    let mut out = vec![0.0; w.len()];
    out[chosen] = loss / w.as_slice()[chosen];
    Ok(LossEstimateVector::from_vec(out))
}

/// Baseline used by the reduced-variance estimator for an arm with weight `w`.
#[inline]
pub fn rv_baseline(w: f64, eta: f64) -> f64 {
    if w >= eta * eta {
        0.5
    } else {
        0.0
    }
}

/// Lower bound `−½η⁻²` on every reduced-variance estimate.
pub fn rv_floor(eta: f64) -> f64 {
    -0.5 / (eta * eta)
}

pub fn rv_estimate(
    chosen: usize,
    loss: f64,
    w: &WeightVector,
    eta: f64,
) -> Result<LossEstimateVector> {
    check(chosen, loss, w)?;
    let out: Vec<f64> = w
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &wi)| {
            let baseline = rv_baseline(wi, eta);
            if i == chosen {
                (loss - baseline) / wi + baseline
            } else {
                baseline
            }
        })
        .collect();
    Ok(LossEstimateVector::from_vec(out))
}

pub fn estimate(
    estimator: Estimator,
    chosen: usize,
    loss: f64,
    w: &WeightVector,
    eta: f64,
) -> Result<LossEstimateVector> {
    match estimator {
        Estimator::ImportanceWeighted => iw_estimate(chosen, loss, w),
        Estimator::ReducedVariance => rv_estimate(chosen, loss, w, eta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(values: &[f64]) -> WeightVector {
        WeightVector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn iw_examples() {
        let est = iw_estimate(0, 0.7, &w(&[0.35, 0.65])).unwrap();
        assert!((est.as_slice()[0] - 2.0).abs() < 1e-15);
        assert_eq!(est.as_slice()[1], 0.0);

        let zero = iw_estimate(1, 0.0, &w(&[0.35, 0.65])).unwrap();
        assert_eq!(zero.as_slice(), &[0.0, 0.0]);

        let single = iw_estimate(0, 1.0, &w(&[1.0])).unwrap();
        assert_eq!(single.as_slice(), &[1.0]);
    }

    #[test]
    fn rv_examples() {
        let est = rv_estimate(0, 1.0, &w(&[0.25, 0.75]), 0.4).unwrap();
        assert_eq!(est.as_slice(), &[2.5, 0.5]);

        // 0.09 < η² = 0.16, so the first arm gets no baseline.
        let est = rv_estimate(0, 1.0, &w(&[0.09, 0.91]), 0.4).unwrap();
        assert!((est.as_slice()[0] - 1.0 / 0.09).abs() < 1e-12);
        assert_eq!(est.as_slice()[1], 0.5);

        let est = rv_estimate(0, 0.0, &w(&[0.5, 0.5]), 0.4).unwrap();
        assert_eq!(est.as_slice(), &[-0.5, 0.5]);
    }

    #[test]
    fn rv_reduces_to_iw_when_eta_is_large() {
        let weights = w(&[0.3, 0.7]);
        let rv = rv_estimate(1, 0.6, &weights, 1.5).unwrap();
        let iw = iw_estimate(1, 0.6, &weights).unwrap();
        assert_eq!(rv, iw);
    }

    #[test]
    fn rejects_bad_inputs() {
        let weights = w(&[0.5, 0.5]);
        assert!(matches!(
            iw_estimate(2, 0.5, &weights),
            Err(Error::ArmOutOfRange { .. })
        ));
        assert_eq!(
            rv_estimate(0, 1.5, &weights, 0.1),
            Err(Error::InvalidLoss(1.5))
        );
    }
}
