use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};
use rand_distr::{Beta, Distribution};

use super::argmax;
use crate::policy::Policy;
use crate::{Error, Result};

/// Thompson Sampling with independent `Beta(sᵢ+1, fᵢ+1)` posteriors over the
/// arms' reward probabilities.
///
/// A non-binary loss `ℓ` is binarized by drawing a success with probability
/// `1 − ℓ`; binary losses are used as-is without consuming randomness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thompson {
    successes: Vec<u64>,
    failures: Vec<u64>,
}

impl Thompson {
    pub fn new(arms: usize) -> Self {
        Self {
            successes: vec![0; arms],
            failures: vec![0; arms],
        }
    }

    pub fn successes(&self) -> &[u64] {
        &self.successes
    }

    pub fn failures(&self) -> &[u64] {
        &self.failures
    }

    /// One posterior draw per arm, in arm order.
    pub fn sample_thetas(&self, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
        self.successes
            .iter()
            .zip(&self.failures)
            .map(|(&s, &f)| {
                let beta = Beta::new(s as f64 + 1.0, f as f64 + 1.0)
                    .map_err(|_| Error::InvalidConfig("invalid Beta posterior"))?;
                Ok(beta.sample(rng))
            })
            .collect()
    }

    pub fn update(&mut self, arm: usize, loss: f64, rng: &mut dyn RngCore) -> Result<()> {
        if arm >= self.successes.len() {
            return Err(Error::ArmOutOfRange {
                arm,
                arms: self.successes.len(),
            });
        }
        if !(0.0..=1.0).contains(&loss) {
            return Err(Error::InvalidLoss(loss));
        }
        let reward = 1.0 - loss;
        let success = if reward == 1.0 {
            true
        } else if reward == 0.0 {
            false
        } else {
            rng.random::<f64>() < reward
        };
        if success {
            self.successes[arm] += 1;
        } else {
            self.failures[arm] += 1;
        }
        Ok(())
    }
}

impl Policy for Thompson {
    fn arms(&self) -> usize {
        self.successes.len()
    }

    fn select(&mut self, rng: &mut dyn RngCore) -> Result<usize> {
        Ok(argmax(self.sample_thetas(rng)?))
    }

    fn observe(&mut self, arm: usize, loss: f64, rng: &mut dyn RngCore) -> Result<()> {
        self.update(arm, loss, rng)
    }
}
