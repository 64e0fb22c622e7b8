//! Value types shared by learners, environments and regret accounting.

use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// Tolerance on `|Σ wᵢ − 1|` accepted for a probability vector.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// A probability distribution over the arms with strictly positive entries.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("empty"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidWeights(
                "entries must be finite and strictly positive",
            ));
        }
        if (math::sum(&weights) - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::InvalidWeights("entries must sum to 1"));
        }
        Ok(Self(weights))
    }

    /// The uniform distribution over `arms` arms.
    pub fn uniform(arms: usize) -> Result<Self> {
        if arms == 0 {
            return Err(Error::InvalidWeights("empty"));
        }
        Ok(Self(alloc::vec![1.0 / arms as f64; arms]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn get(&self, arm: usize) -> Result<f64> {
        self.0.get(arm).copied().ok_or(Error::ArmOutOfRange {
            arm,
            arms: self.0.len(),
        })
    }

    /// Inverse-CDF draw from a single uniform `u ∈ [0, 1)`.
    pub fn sample(&self, u: f64) -> usize {
        sample_index(&self.0, u)
    }
}

/// Inverse-CDF sampling with arms scanned in index order: returns the first
/// `i` with `u < w₀ + … + wᵢ`. Rounding slack in the total lands on the last arm.
pub fn sample_index(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len().saturating_sub(1)
}

/// A full loss vector `ℓ ∈ [0, 1]ᴷ` for one round.
#[derive(Debug, Clone, PartialEq)]
pub struct LossVector(Vec<f64>);

impl LossVector {
    pub fn new(losses: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = losses.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::InvalidLoss(bad));
        }
        Ok(Self(losses))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, arm: usize) -> Result<f64> {
        self.0.get(arm).copied().ok_or(Error::ArmOutOfRange {
            arm,
            arms: self.0.len(),
        })
    }

    /// `‖self − other‖_∞`.
    pub fn sup_distance(&self, other: &LossVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Per-arm loss estimates produced by an estimator for one round.
///
/// Only the estimators in [`crate::tsallis::estimator`] build these, so the
/// sign constraints of the estimator that produced it always hold.
#[derive(Debug, Clone, PartialEq)]
pub struct LossEstimateVector(Vec<f64>);

impl LossEstimateVector {
    pub(crate) fn from_vec(estimates: Vec<f64>) -> Self {
        Self(estimates)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Suboptimality gaps `Δᵢ = E[ℓᵢ] − minⱼ E[ℓⱼ]`, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "Vec<f64>", into = "Vec<f64>")
)]
pub struct GapVector {
    gaps: Vec<f64>,
    unique_optimum: Option<usize>,
}

impl GapVector {
    pub fn new(gaps: Vec<f64>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::InvalidGaps("empty"));
        }
        if gaps.iter().any(|g| !(0.0..=1.0).contains(g)) {
            return Err(Error::InvalidGaps("entries must lie in [0, 1]"));
        }
        let mut zeros = gaps.iter().enumerate().filter(|(_, g)| **g == 0.0);
        let unique_optimum = match (zeros.next(), zeros.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        };
        Ok(Self {
            gaps,
            unique_optimum,
        })
    }

    /// Gaps of a loss-mean vector relative to its smallest entry.
    pub fn from_means(means: &[f64]) -> Result<Self> {
        let best = math::min(means);
        Self::new(means.iter().map(|m| m - best).collect())
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.gaps
    }

    pub fn get(&self, arm: usize) -> Result<f64> {
        self.gaps.get(arm).copied().ok_or(Error::ArmOutOfRange {
            arm,
            arms: self.gaps.len(),
        })
    }

    /// Index of the optimal arm when exactly one gap is zero.
    pub fn unique_optimum(&self) -> Option<usize> {
        self.unique_optimum
    }

    /// First arm with a zero gap.
    pub fn best_arm(&self) -> Option<usize> {
        self.gaps.iter().position(|g| *g == 0.0)
    }

    /// `Δ_min`, the smallest strictly positive gap.
    pub fn min_positive(&self) -> Option<f64> {
        self.gaps
            .iter()
            .copied()
            .filter(|g| *g > 0.0)
            .reduce(f64::min)
    }

    pub fn max(&self) -> f64 {
        self.gaps.iter().copied().fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<f64>> for GapVector {
    type Error = Error;

    fn try_from(gaps: Vec<f64>) -> Result<Self> {
        Self::new(gaps)
    }
}

impl From<GapVector> for Vec<f64> {
    fn from(gaps: GapVector) -> Self {
        gaps.gaps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn weight_vector_rejects_boundary_and_bad_sums() {
        assert!(WeightVector::new(vec![0.0, 1.0]).is_err());
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
        assert!(WeightVector::new(vec![0.5, 0.5 + 5e-10]).is_ok());
    }

    #[test]
    fn inverse_cdf_convention() {
        let w = WeightVector::new(vec![0.3, 0.7]).unwrap();
        assert_eq!(w.sample(0.0), 0);
        assert_eq!(w.sample(0.31), 1);
        assert_eq!(w.sample(0.999_999_999), 1);
    }

    #[test]
    fn gap_vector_flags_unique_optimum() {
        let g = GapVector::new(vec![0.0, 0.25]).unwrap();
        assert_eq!(g.unique_optimum(), Some(0));
        assert_eq!(g.min_positive(), Some(0.25));

        let multi = GapVector::new(vec![0.125, 0.0, 0.0]).unwrap();
        assert_eq!(multi.unique_optimum(), None);
        assert_eq!(multi.best_arm(), Some(1));

        assert!(GapVector::new(vec![-0.1, 0.0]).is_err());
    }

    #[test]
    fn loss_vector_range() {
        assert!(LossVector::new(vec![0.0, 1.0, 0.5]).is_ok());
        assert_eq!(
            LossVector::new(vec![1.5]).unwrap_err(),
            Error::InvalidLoss(1.5)
        );
    }
}
