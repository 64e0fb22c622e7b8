//! Common interface for bandit learners driven by a simulator.

use rand::RngCore;

use crate::Result;

/// A bandit learner that picks one arm per round and sees only that arm's loss.
///
/// Implementations are deterministic functions of their state, the observed
/// losses and the randomness they draw from `rng`.
pub trait Policy {
    fn arms(&self) -> usize;

    /// Chooses the arm for the next round.
    fn select(&mut self, rng: &mut dyn RngCore) -> Result<usize>;

    /// Feeds back the loss of the arm returned by the preceding `select`.
    fn observe(&mut self, arm: usize, loss: f64, rng: &mut dyn RngCore) -> Result<()>;
}

impl<P: Policy + ?Sized> Policy for alloc::boxed::Box<P> {
    fn arms(&self) -> usize {
        (**self).arms()
    }

    fn select(&mut self, rng: &mut dyn RngCore) -> Result<usize> {
        (**self).select(rng)
    }

    fn observe(&mut self, arm: usize, loss: f64, rng: &mut dyn RngCore) -> Result<()> {
        (**self).observe(arm, loss, rng)
    }
}
