//! Loss environments with known gaps.
//!
//! Every environment emits a full loss vector per round; the simulator shows
//! the learner only the played arm's entry and scores the round with the
//! ground-truth gaps from [`EnvironmentSpec::gaps`].

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::math;
use crate::types::{GapVector, LossVector};
use crate::{Error, Result};

pub const DEFAULT_INITIAL_PHASE: u64 = 10;
pub const DEFAULT_GROWTH: f64 = 1.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CorruptionStrategy {
    /// Raise the optimal arm's loss to 1 while budget remains.
    #[default]
    FlipBest,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum EnvironmentSpec {
    /// Independent Bernoulli losses with fixed means.
    Stochastic { means: Vec<f64> },
    /// Alternates between Bernoulli means `(0, Δ, …, Δ)` and `(1−Δ, 1, …, 1)`;
    /// phase `k` lasts `⌈initial_phase·growthᵏ⌉` rounds. Gaps stay `(0, Δ, …, Δ)`.
    Switching {
        arms: usize,
        gap: f64,
        #[cfg_attr(feature = "serde", serde(default = "default_initial_phase"))]
        initial_phase: u64,
        #[cfg_attr(feature = "serde", serde(default = "default_growth"))]
        growth: f64,
    },
    /// A stochastic or switching environment whose losses are modified by an
    /// adversary with total budget `Σₜ ‖ℓ̄ₜ − ℓₜ‖_∞ ≤ budget`.
    Corrupted {
        base: Box<EnvironmentSpec>,
        budget: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        strategy: CorruptionStrategy,
    },
}

#[cfg(feature = "serde")]
fn default_initial_phase() -> u64 {
    DEFAULT_INITIAL_PHASE
}

#[cfg(feature = "serde")]
fn default_growth() -> f64 {
    DEFAULT_GROWTH
}

impl EnvironmentSpec {
    /// Optimal arm with mean loss `(1−Δ)/2`, the rest `(1+Δ)/2`.
    pub fn experiment1(arms: usize, gap: f64) -> Result<Self> {
        if arms < 2 {
            return Err(Error::InvalidConfig("need at least two arms"));
        }
        if !(gap > 0.0 && gap <= 1.0) {
            return Err(Error::InvalidConfig("gap must lie in (0, 1]"));
        }
        let mut means = vec![(1.0 + gap) / 2.0; arms];
        means[0] = (1.0 - gap) / 2.0;
        Ok(Self::Stochastic { means })
    }

    /// One suboptimal arm with mean loss 9/16; every other arm is optimal at 7/16.
    pub fn multi_optimal(arms: usize) -> Result<Self> {
        if arms < 2 {
            return Err(Error::InvalidConfig("need at least two arms"));
        }
        let mut means = vec![7.0 / 16.0; arms];
        means[0] = 9.0 / 16.0;
        Ok(Self::Stochastic { means })
    }

    pub fn switching(arms: usize, gap: f64) -> Result<Self> {
        let spec = Self::Switching {
            arms,
            gap,
            initial_phase: DEFAULT_INITIAL_PHASE,
            growth: DEFAULT_GROWTH,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn corrupted(base: EnvironmentSpec, budget: f64) -> Result<Self> {
        let spec = Self::Corrupted {
            base: Box::new(base),
            budget,
            strategy: CorruptionStrategy::FlipBest,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn arms(&self) -> usize {
        match self {
            Self::Stochastic { means } => means.len(),
            Self::Switching { arms, .. } => *arms,
            Self::Corrupted { base, .. } => base.arms(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Stochastic { means } => {
                if means.is_empty() {
                    return Err(Error::InvalidConfig("need at least one arm"));
                }
                if means.iter().any(|m| !(0.0..=1.0).contains(m)) {
                    return Err(Error::InvalidConfig("means must lie in [0, 1]"));
                }
            }
            Self::Switching {
                arms,
                gap,
                initial_phase,
                growth,
            } => {
                if *arms == 0 {
                    return Err(Error::InvalidConfig("need at least one arm"));
                }
                if !(*gap > 0.0 && *gap <= 1.0) {
                    return Err(Error::InvalidConfig("gap must lie in (0, 1]"));
                }
                if *initial_phase == 0 {
                    return Err(Error::InvalidConfig(
                        "initial phase must last at least one round",
                    ));
                }
                if !(growth.is_finite() && *growth > 1.0) {
                    return Err(Error::InvalidConfig("growth must exceed 1"));
                }
            }
            Self::Corrupted { base, budget, .. } => {
                if matches!(**base, Self::Corrupted { .. }) {
                    return Err(Error::InvalidConfig("corruption cannot be nested"));
                }
                if !(budget.is_finite() && *budget >= 0.0) {
                    return Err(Error::InvalidConfig(
                        "corruption budget must be finite and >= 0",
                    ));
                }
                base.validate()?;
            }
        }
        Ok(())
    }

    /// Ground-truth gaps. Corruption does not change them: regret is measured
    /// against the uncorrupted environment.
    pub fn gaps(&self) -> Result<GapVector> {
        match self {
            Self::Stochastic { means } => GapVector::from_means(means),
            Self::Switching { arms, gap, .. } => {
                let mut gaps = vec![*gap; *arms];
                gaps[0] = 0.0;
                GapVector::new(gaps)
            }
            Self::Corrupted { base, .. } => base.gaps(),
        }
    }
}

/// Length of switching phase `k`: `⌈initial·growthᵏ⌉`.
pub fn phase_length(initial: u64, growth: f64, k: u32) -> u64 {
    math::ceil(initial as f64 * math::powf(growth, f64::from(k))) as u64
}

/// Bernoulli means of the switching environment in phase `k`.
pub fn switching_means(arms: usize, gap: f64, phase: u32) -> Vec<f64> {
    let (best, rest) = if phase % 2 == 0 {
        (0.0, gap)
    } else {
        (1.0 - gap, 1.0)
    };
    let mut means = vec![rest; arms];
    if let Some(first) = means.first_mut() {
        *first = best;
    }
    means
}

/// Independent Bernoulli losses, one uniform draw per arm in index order.
pub fn stochastic_round(means: &[f64], rng: &mut dyn RngCore) -> LossVector {
    let losses = means
        .iter()
        .map(|&m| {
            let u: f64 = rng.random();
            if u < m {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    LossVector::new(losses).expect("Bernoulli losses are 0 or 1")
}

/// Mutable per-run environment state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnvState {
    /// Rounds emitted so far.
    pub round: u64,
    /// Current switching phase.
    pub phase: u32,
    /// Last round of the current switching phase.
    pub phase_end: u64,
    /// `Σ ‖ℓ̄ₜ − ℓₜ‖_∞` so far.
    pub corruption_spent: f64,
}

/// One round of losses before and after corruption.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundLosses {
    pub clean: LossVector,
    pub served: LossVector,
}

/// A running instance of an [`EnvironmentSpec`].
#[derive(Debug, Clone)]
pub struct Environment {
    spec: EnvironmentSpec,
    gaps: GapVector,
    state: EnvState,
}

impl Environment {
    pub fn new(spec: EnvironmentSpec) -> Result<Self> {
        spec.validate()?;
        let gaps = spec.gaps()?;
        let phase_end = match base_of(&spec) {
            EnvironmentSpec::Switching {
                initial_phase,
                growth,
                ..
            } => phase_length(*initial_phase, *growth, 0),
            _ => 0,
        };
        Ok(Self {
            spec,
            gaps,
            state: EnvState {
                phase_end,
                ..EnvState::default()
            },
        })
    }

    pub fn spec(&self) -> &EnvironmentSpec {
        &self.spec
    }

    pub fn gaps(&self) -> &GapVector {
        &self.gaps
    }

    pub fn state(&self) -> &EnvState {
        &self.state
    }

    pub fn arms(&self) -> usize {
        self.spec.arms()
    }

    /// Losses served to the learner in the next round.
    pub fn step(&mut self, rng: &mut dyn RngCore) -> LossVector {
        self.step_logged(rng).served
    }

    /// Next round's losses, both before and after corruption.
    pub fn step_logged(&mut self, rng: &mut dyn RngCore) -> RoundLosses {
        self.state.round += 1;
        let clean = match base_of(&self.spec) {
            EnvironmentSpec::Stochastic { means } => stochastic_round(means, rng),
            EnvironmentSpec::Switching {
                arms,
                gap,
                initial_phase,
                growth,
            } => {
                while self.state.round > self.state.phase_end {
                    self.state.phase += 1;
                    self.state.phase_end += phase_length(*initial_phase, *growth, self.state.phase);
                }
                stochastic_round(&switching_means(*arms, *gap, self.state.phase), rng)
            }
            EnvironmentSpec::Corrupted { .. } => unreachable!("base_of strips corruption"),
        };
        let served = self.corrupt_round(&clean);
        RoundLosses { clean, served }
    }

    /// Applies the corruption strategy to `clean` and charges the budget.
    /// Identity for uncorrupted environments and once the budget is spent.
    pub fn corrupt_round(&mut self, clean: &LossVector) -> LossVector {
        let EnvironmentSpec::Corrupted {
            budget, strategy, ..
        } = &self.spec
        else {
            return clean.clone();
        };
        let remaining = budget - self.state.corruption_spent;
        if remaining <= 0.0 {
            return clean.clone();
        }
        match strategy {
            CorruptionStrategy::FlipBest => {
                let best = self.gaps.best_arm().unwrap_or(0);
                let mut losses = clean.as_slice().to_vec();
                let wanted = 1.0 - losses[best];
                if wanted <= 0.0 {
                    return clean.clone();
                }
                if wanted >= remaining {
                    losses[best] = (losses[best] + remaining).min(1.0);
                    self.state.corruption_spent = *budget;
                } else {
                    losses[best] = 1.0;
                    self.state.corruption_spent += wanted;
                }
                LossVector::new(losses).expect("corrupted losses stay in [0, 1]")
            }
        }
    }
}

fn base_of(spec: &EnvironmentSpec) -> &EnvironmentSpec {
    match spec {
        EnvironmentSpec::Corrupted { base, .. } => base,
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(stochastic_round(&[0.0; 3], &mut rng).as_slice(), &[0.0; 3]);
            assert_eq!(stochastic_round(&[1.0; 3], &mut rng).as_slice(), &[1.0; 3]);
        }
    }

    #[test]
    fn bernoulli_means_concentrate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let means = [0.1, 0.5, 0.875];
        let n = 100_000;
        let mut sums = [0.0; 3];
        for _ in 0..n {
            for (s, l) in sums
                .iter_mut()
                .zip(stochastic_round(&means, &mut rng).as_slice())
            {
                *s += l;
            }
        }
        for (s, m) in sums.iter().zip(means) {
            let sigma = libm::sqrt(m * (1.0 - m) / n as f64);
            assert!((s / n as f64 - m).abs() <= 3.0 * sigma);
        }
    }

    #[test]
    fn experiment1_means_and_gaps() {
        let spec = EnvironmentSpec::experiment1(2, 0.25).unwrap();
        assert_eq!(
            spec,
            EnvironmentSpec::Stochastic {
                means: vec![0.375, 0.625]
            }
        );
        assert_eq!(spec.gaps().unwrap().as_slice(), &[0.0, 0.25]);
        let spec = EnvironmentSpec::experiment1(2, 1.0).unwrap();
        assert_eq!(spec.gaps().unwrap().as_slice(), &[0.0, 1.0]);
        let spec = EnvironmentSpec::experiment1(5, 0.125).unwrap();
        assert_eq!(
            spec.gaps().unwrap().as_slice(),
            &[0.0, 0.125, 0.125, 0.125, 0.125]
        );
        assert!(EnvironmentSpec::experiment1(1, 0.2).is_err());
        assert!(EnvironmentSpec::experiment1(2, 0.0).is_err());
    }

    #[test]
    fn multi_optimal_means_and_gaps() {
        let spec = EnvironmentSpec::multi_optimal(2).unwrap();
        assert_eq!(
            spec,
            EnvironmentSpec::Stochastic {
                means: vec![0.5625, 0.4375]
            }
        );
        let gaps = EnvironmentSpec::multi_optimal(3).unwrap().gaps().unwrap();
        assert_eq!(gaps.as_slice(), &[0.125, 0.0, 0.0]);
        assert_eq!(gaps.unique_optimum(), None);
    }

    #[test]
    fn switching_phase_lengths_and_means() {
        let lengths: Vec<u64> = (0..4).map(|k| phase_length(10, 1.6, k)).collect();
        assert_eq!(lengths, vec![10, 16, 26, 41]);
        assert_eq!(switching_means(3, 0.125, 0), vec![0.0, 0.125, 0.125]);
        assert_eq!(switching_means(3, 0.125, 1), vec![0.875, 1.0, 1.0]);
    }

    #[test]
    fn switching_env_follows_phases() {
        let mut env = Environment::new(EnvironmentSpec::switching(2, 0.125).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut phases = Vec::new();
        for _ in 0..52 {
            let losses = env.step(&mut rng);
            phases.push(env.state().phase);
            if env.state().phase % 2 == 0 {
                assert_eq!(losses.as_slice()[0], 0.0);
            } else {
                assert_eq!(losses.as_slice()[1], 1.0);
            }
            assert_eq!(env.gaps().as_slice(), &[0.0, 0.125]);
        }
        assert_eq!(phases[9], 0);
        assert_eq!(phases[10], 1);
        assert_eq!(phases[25], 1);
        assert_eq!(phases[26], 2);
        assert_eq!(phases[51], 2);
    }

    #[test]
    fn zero_budget_is_identity() {
        let base = EnvironmentSpec::experiment1(2, 0.25).unwrap();
        let mut env = Environment::new(EnvironmentSpec::corrupted(base, 0.0).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let round = env.step_logged(&mut rng);
            assert_eq!(round.clean, round.served);
        }
        assert_eq!(env.state().corruption_spent, 0.0);
    }

    #[test]
    fn flip_best_spends_one_per_flipped_round() {
        let base = EnvironmentSpec::experiment1(2, 0.25).unwrap();
        let mut env = Environment::new(EnvironmentSpec::corrupted(base, 3.0).unwrap()).unwrap();
        let clean = LossVector::new(vec![0.0, 0.0]).unwrap();
        let served = env.corrupt_round(&clean);
        assert_eq!(served.as_slice(), &[1.0, 0.0]);
        assert_eq!(env.state().corruption_spent, 1.0);
        // Already-maximal losses cost nothing.
        let ones = LossVector::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(env.corrupt_round(&ones), ones);
        assert_eq!(env.state().corruption_spent, 1.0);
    }

    #[test]
    fn budget_is_a_hard_cap() {
        let base = EnvironmentSpec::Stochastic {
            means: vec![0.2, 0.6],
        };
        let mut env = Environment::new(EnvironmentSpec::corrupted(base, 2.5).unwrap()).unwrap();
        let clean = LossVector::new(vec![0.0, 1.0]).unwrap();
        env.corrupt_round(&clean);
        env.corrupt_round(&clean);
        let partial = env.corrupt_round(&clean);
        assert_eq!(partial.as_slice(), &[0.5, 1.0]);
        assert_eq!(env.state().corruption_spent, 2.5);
        assert_eq!(env.corrupt_round(&clean), clean);
    }

    #[test]
    fn corruption_keeps_base_gaps() {
        let base = EnvironmentSpec::experiment1(2, 0.25).unwrap();
        let spec = EnvironmentSpec::corrupted(base.clone(), 10.0).unwrap();
        assert_eq!(spec.gaps().unwrap(), base.gaps().unwrap());
    }

    #[test]
    fn nested_corruption_is_rejected() {
        let base = EnvironmentSpec::experiment1(2, 0.25).unwrap();
        let once = EnvironmentSpec::corrupted(base, 1.0).unwrap();
        assert!(EnvironmentSpec::corrupted(once, 1.0).is_err());
    }
}
