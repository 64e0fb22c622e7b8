use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use super::argmax;
use crate::math;
use crate::policy::Policy;
use crate::{Error, Result};

/// UCB1 with index `μ̂ᵢ + √(α·log t / (2nᵢ))` on rewards `1 − ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ucb1 {
    counts: Vec<u64>,
    mean_rewards: Vec<f64>,
    t: u64,
    alpha_param: f64,
}

impl Ucb1 {
    pub const DEFAULT_ALPHA: f64 = 1.5;

    pub fn new(arms: usize) -> Self {
        Self::with_alpha(arms, Self::DEFAULT_ALPHA)
    }

    pub fn with_alpha(arms: usize, alpha_param: f64) -> Self {
        Self {
            counts: vec![0; arms],
            mean_rewards: vec![0.0; arms],
            t: 0,
            alpha_param,
        }
    }

    /// Rebuilds a state from pull counts, mean rewards and completed rounds.
    pub fn from_state(counts: Vec<u64>, mean_rewards: Vec<f64>, t: u64) -> Result<Self> {
        if counts.len() != mean_rewards.len() {
            return Err(Error::ArmCountMismatch {
                expected: counts.len(),
                got: mean_rewards.len(),
            });
        }
        if mean_rewards.iter().any(|m| !(0.0..=1.0).contains(m)) {
            return Err(Error::InvalidConfig("mean rewards must lie in [0, 1]"));
        }
        Ok(Self {
            counts,
            mean_rewards,
            t,
            alpha_param: Self::DEFAULT_ALPHA,
        })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn mean_rewards(&self) -> &[f64] {
        &self.mean_rewards
    }

    pub fn round(&self) -> u64 {
        self.t
    }

    /// Index of `arm` in round `t`; infinite for arms never played.
    pub fn index(&self, arm: usize, t: u64) -> f64 {
        let n = self.counts[arm];
        if n == 0 {
            return f64::INFINITY;
        }
        let bonus = math::sqrt(self.alpha_param * math::ln(t as f64) / (2.0 * n as f64));
        self.mean_rewards[arm] + bonus
    }

    /// Arm for the next round: unplayed arms first in index order, then the
    /// largest index with ties going to the lowest arm.
    pub fn choose(&self) -> usize {
        if let Some(unplayed) = self.counts.iter().position(|&n| n == 0) {
            return unplayed;
        }
        let t = self.t + 1;
        argmax((0..self.counts.len()).map(|i| self.index(i, t)))
    }

    pub fn update(&mut self, arm: usize, loss: f64) -> Result<()> {
        if arm >= self.counts.len() {
            return Err(Error::ArmOutOfRange {
                arm,
                arms: self.counts.len(),
            });
        }
        if !(0.0..=1.0).contains(&loss) {
            return Err(Error::InvalidLoss(loss));
        }
        let reward = 1.0 - loss;
        self.counts[arm] += 1;
        let n = self.counts[arm] as f64;
        self.mean_rewards[arm] += (reward - self.mean_rewards[arm]) / n;
        self.t += 1;
        Ok(())
    }
}

impl Policy for Ucb1 {
    fn arms(&self) -> usize {
        self.counts.len()
    }

    fn select(&mut self, _rng: &mut dyn RngCore) -> Result<usize> {
        Ok(self.choose())
    }

    fn observe(&mut self, arm: usize, loss: f64, _rng: &mut dyn RngCore) -> Result<()> {
        self.update(arm, loss)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_exploration_in_index_order() {
        let mut ucb = Ucb1::new(3);
        for expected in 0..3 {
            let arm = ucb.choose();
            assert_eq!(arm, expected);
            ucb.update(arm, 1.0).unwrap();
        }
    }

    #[test]
    fn dominant_mean_wins() {
        let ucb = Ucb1::from_state(vec![1, 1], vec![1.0, 0.0], 2).unwrap();
        assert_eq!(ucb.choose(), 0);
    }

    #[test]
    fn larger_bonus_wins_on_equal_means() {
        let ucb = Ucb1::from_state(vec![100, 1], vec![0.5, 0.5], 100).unwrap();
        assert_eq!(ucb.choose(), 1);
    }

    #[test]
    fn ties_go_to_lowest_arm() {
        let ucb = Ucb1::from_state(vec![4, 4, 4], vec![0.25, 0.75, 0.75], 12).unwrap();
        assert_eq!(ucb.choose(), 1);
    }

    #[test]
    fn running_mean_of_rewards() {
        let mut ucb = Ucb1::new(1);
        ucb.update(0, 0.0).unwrap();
        ucb.update(0, 1.0).unwrap();
        ucb.update(0, 0.25).unwrap();
        assert!((ucb.mean_rewards()[0] - 1.75 / 3.0).abs() < 1e-15);
        assert_eq!(ucb.round(), 3);
        assert!(ucb.update(1, 0.0).is_err());
    }
}
