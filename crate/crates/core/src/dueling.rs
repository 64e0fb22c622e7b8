//! Utility-based dueling bandits and the Sparring reduction.
//!
//! Two independent bandit learners each pick one arm of the duel. The left
//! side wins with probability `(1 + u_left − u_right)/2`; each learner is
//! charged loss 1 when its side loses, so their losses always sum to 1.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::math;
use crate::policy::Policy;
use crate::{Error, Result};

/// A stretch of rounds with fixed utilities.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct UtilitySegment {
    pub rounds: u64,
    pub utilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum DuelSpec {
    /// Fixed utilities `uᵢ ∈ [0, 1]`.
    Stochastic { utilities: Vec<f64> },
    /// Utilities that change over time; the last segment extends indefinitely.
    Piecewise { segments: Vec<UtilitySegment> },
}

impl DuelSpec {
    pub fn validate(&self) -> Result<()> {
        let check = |u: &[f64]| -> Result<()> {
            if u.is_empty() {
                return Err(Error::InvalidConfig("need at least one arm"));
            }
            if u.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(Error::InvalidConfig("utilities must lie in [0, 1]"));
            }
            Ok(())
        };
        match self {
            Self::Stochastic { utilities } => check(utilities),
            Self::Piecewise { segments } => {
                let first = segments
                    .first()
                    .ok_or(Error::InvalidConfig("need at least one segment"))?;
                for s in segments {
                    check(&s.utilities)?;
                    if s.utilities.len() != first.utilities.len() {
                        return Err(Error::ArmCountMismatch {
                            expected: first.utilities.len(),
                            got: s.utilities.len(),
                        });
                    }
                }
                Ok(())
            }
        }
    }

    pub fn arms(&self) -> usize {
        match self {
            Self::Stochastic { utilities } => utilities.len(),
            Self::Piecewise { segments } => segments.first().map_or(0, |s| s.utilities.len()),
        }
    }

    /// Utilities in round `t ≥ 1`.
    pub fn utilities_at(&self, t: u64) -> &[f64] {
        match self {
            Self::Stochastic { utilities } => utilities,
            Self::Piecewise { segments } => {
                let mut end = 0;
                for s in segments {
                    end += s.rounds;
                    if t <= end {
                        return &s.utilities;
                    }
                }
                &segments[segments.len() - 1].utilities
            }
        }
    }
}

/// Which learner's arm won a duel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `P[left wins] = (1 + uᵢ − uⱼ)/2`.
pub fn win_probability(utilities: &[f64], left: usize, right: usize) -> Result<f64> {
    let arms = utilities.len();
    for arm in [left, right] {
        if arm >= arms {
            return Err(Error::ArmOutOfRange { arm, arms });
        }
    }
    Ok((1.0 + utilities[left] - utilities[right]) / 2.0)
}

/// One duel between arms `left` and `right`, resolved with a single uniform draw.
///
/// Self-duels are allowed; each side then wins with probability ½.
pub fn duel(utilities: &[f64], left: usize, right: usize, rng: &mut dyn RngCore) -> Result<Side> {
    let p = win_probability(utilities, left, right)?;
    let u: f64 = rng.random();
    Ok(if u < p { Side::Left } else { Side::Right })
}

/// Outcome of one Sparring round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuelRound {
    pub left_arm: usize,
    pub right_arm: usize,
    pub winner: Side,
    pub left_loss: f64,
    pub right_loss: f64,
    /// `2·maxₖ uₖ − (u_left + u_right)` under this round's utilities.
    pub regret: f64,
}

/// Sparring: two independent learners playing against each other.
#[derive(Debug, Clone)]
pub struct Sparring<P> {
    left: P,
    right: P,
    t: u64,
    regret: f64,
    cum_utilities: Vec<f64>,
    cum_played: f64,
}

impl<P: Policy> Sparring<P> {
    pub fn new(left: P, right: P) -> Result<Self> {
        if left.arms() != right.arms() {
            return Err(Error::ArmCountMismatch {
                expected: left.arms(),
                got: right.arms(),
            });
        }
        let arms = left.arms();
        Ok(Self {
            left,
            right,
            t: 0,
            regret: 0.0,
            cum_utilities: vec![0.0; arms],
            cum_played: 0.0,
        })
    }

    pub fn left(&self) -> &P {
        &self.left
    }

    pub fn right(&self) -> &P {
        &self.right
    }

    pub fn round(&self) -> u64 {
        self.t
    }

    /// `Σₜ (2·maxₖ uₜ,ₖ − uₜ,ᵢ − uₜ,ⱼ)`: regret against each round's best arm.
    pub fn regret(&self) -> f64 {
        self.regret
    }

    /// `Σₜ uₜ,ₖ` for every arm `k`.
    pub fn cumulative_utilities(&self) -> &[f64] {
        &self.cum_utilities
    }

    /// `Σₜ (uₜ,ᵢ + uₜ,ⱼ)` over the arms actually played.
    pub fn cumulative_played(&self) -> f64 {
        self.cum_played
    }

    /// Regret against the fixed arm with the largest cumulative utility so far.
    pub fn hindsight_regret(&self) -> f64 {
        2.0 * self
            .cum_utilities
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
            - self.cum_played
    }

    /// Regret against a given fixed arm.
    pub fn regret_against(&self, arm: usize) -> Result<f64> {
        let u = self.cum_utilities.get(arm).ok_or(Error::ArmOutOfRange {
            arm,
            arms: self.cum_utilities.len(),
        })?;
        Ok(2.0 * u - self.cum_played)
    }

    pub fn play_round(
        &mut self,
        spec: &DuelSpec,
        duel_rng: &mut dyn RngCore,
        left_rng: &mut dyn RngCore,
        right_rng: &mut dyn RngCore,
    ) -> Result<DuelRound> {
        if spec.arms() != self.cum_utilities.len() {
            return Err(Error::ArmCountMismatch {
                expected: self.cum_utilities.len(),
                got: spec.arms(),
            });
        }
        let t = self.t + 1;
        let utilities = spec.utilities_at(t);
        let left_arm = self.left.select(left_rng)?;
        let right_arm = self.right.select(right_rng)?;
        let winner = duel(utilities, left_arm, right_arm, duel_rng)?;
        let (left_loss, right_loss) = match winner {
            Side::Left => (0.0, 1.0),
            Side::Right => (1.0, 0.0),
        };
        self.left.observe(left_arm, left_loss, left_rng)?;
        self.right.observe(right_arm, right_loss, right_rng)?;

        let best = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let played = utilities[left_arm] + utilities[right_arm];
        let regret = 2.0 * best - played;
        self.regret += regret;
        for (acc, u) in self.cum_utilities.iter_mut().zip(utilities) {
            *acc += u;
        }
        self.cum_played += played;
        self.t = t;
        Ok(DuelRound {
            left_arm,
            right_arm,
            winner,
            left_loss,
            right_loss,
            regret,
        })
    }
}

/// Standard error of a Bernoulli(p) sample mean over `n` draws.
pub fn bernoulli_standard_error(p: f64, n: u64) -> f64 {
    math::sqrt(p * (1.0 - p) / n as f64)
}
