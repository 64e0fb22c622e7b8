use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::math;
use crate::policy::Policy;
use crate::types::sample_index;
use crate::{Error, Result};

/// EXP3 on losses: `wᵢ ∝ exp(−ηₜ·L̂ᵢ)` with `ηₜ = √(log K/(tK))` and
/// importance-weighted loss estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct Exp3 {
    cum_estimates: Vec<f64>,
    t: u64,
    last_weights: Option<Vec<f64>>,
}

impl Exp3 {
    pub fn new(arms: usize) -> Self {
        Self {
            cum_estimates: vec![0.0; arms],
            t: 0,
            last_weights: None,
        }
    }

    pub fn cum_estimates(&self) -> &[f64] {
        &self.cum_estimates
    }

    pub fn round(&self) -> u64 {
        self.t
    }

    /// `√(log K/(tK))` for round `t ≥ 1`.
    pub fn learning_rate(arms: usize, t: u64) -> f64 {
        let k = arms as f64;
        math::sqrt(math::ln(k) / (t as f64 * k))
    }

    /// Exponential weights for the given estimates; shifted by the minimum so
    /// the largest term is `exp(0)`.
    pub fn weights_for(cum_estimates: &[f64], eta: f64) -> Vec<f64> {
        let min = math::min(cum_estimates);
        let raw: Vec<f64> = cum_estimates
            .iter()
            .map(|l| math::exp(-eta * (l - min)))
            .collect();
        let total = math::sum(&raw);
        raw.into_iter().map(|w| w / total).collect()
    }

    /// Distribution for the next round.
    pub fn weights(&self) -> Vec<f64> {
        let eta = Self::learning_rate(self.cum_estimates.len(), self.t + 1);
        Self::weights_for(&self.cum_estimates, eta)
    }

    pub fn update(&mut self, arm: usize, loss: f64, w_used: &[f64]) -> Result<()> {
        if arm >= self.cum_estimates.len() {
            return Err(Error::ArmOutOfRange {
                arm,
                arms: self.cum_estimates.len(),
            });
        }
        if !(0.0..=1.0).contains(&loss) {
            return Err(Error::InvalidLoss(loss));
        }
        self.cum_estimates[arm] += loss / w_used[arm];
        self.t += 1;
        Ok(())
    }
}

impl Policy for Exp3 {
    fn arms(&self) -> usize {
        self.cum_estimates.len()
    }

    fn select(&mut self, rng: &mut dyn RngCore) -> Result<usize> {
        let w = self.weights();
        let arm = sample_index(&w, rng.random());
        self.last_weights = Some(w);
        Ok(arm)
    }

    fn observe(&mut self, arm: usize, loss: f64, _rng: &mut dyn RngCore) -> Result<()> {
        let w = self
            .last_weights
            .take()
            .ok_or(Error::InvalidConfig("observe called before select"))?;
        self.update(arm, loss, &w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::LN_2;

    #[test]
    fn fresh_state_is_uniform() {
        let w = Exp3::new(4).weights();
        assert!(w.iter().all(|&v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn softmax_arithmetic() {
        let eta = 0.3;
        let w = Exp3::weights_for(&[0.0, LN_2 / eta], eta);
        assert!((w[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((w[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn shift_invariance() {
        let eta = 0.7;
        let base = [0.4, 2.5, 1.0];
        let shifted: Vec<f64> = base.iter().map(|l| l + 17.25).collect();
        let a = Exp3::weights_for(&base, eta);
        let b = Exp3::weights_for(&shifted, eta);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn iw_update() {
        let mut exp3 = Exp3::new(2);
        exp3.update(1, 0.5, &[0.75, 0.25]).unwrap();
        assert_eq!(exp3.cum_estimates(), &[0.0, 2.0]);
        assert_eq!(exp3.round(), 1);
    }
}
