//! Empirical pseudo-regret accounting on a logarithmic checkpoint grid.

use alloc::string::String;
use alloc::vec::Vec;

use crate::math;
use crate::types::GapVector;
use crate::{Error, Result};

/// Rounds at which a [`RegretTrace`] materializes its running sum.
///
/// Every round up to `dense_until`, then `⌈10^{k/per_decade}⌉` for
/// `k = 0, 1, …`, and always the horizon itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct CheckpointGrid {
    pub dense_until: u64,
    pub per_decade: u32,
}

impl Default for CheckpointGrid {
    fn default() -> Self {
        Self {
            dense_until: 100,
            per_decade: 20,
        }
    }
}

impl CheckpointGrid {
    pub fn rounds(&self, horizon: u64) -> Vec<u64> {
        let mut out: Vec<u64> = (1..=self.dense_until.min(horizon)).collect();
        if self.per_decade > 0 {
            let per = u64::from(self.per_decade);
            for k in 0.. {
                // 10^{k/per} split as an exact power of ten times the fractional
                // part, so whole decades land exactly on 10^d.
                let decade = (k / per) as i32;
                let frac = (k % per) as f64 / per as f64;
                let value = libm::pow(10.0, f64::from(decade)) * math::powf(10.0, frac);
                let round = math::ceil(value) as u64;
                if round > horizon {
                    break;
                }
                if out.last().map_or(true, |&last| round > last) {
                    out.push(round);
                }
            }
        }
        if horizon > 0 && out.last() != Some(&horizon) {
            out.push(horizon);
        }
        out
    }
}

/// Cumulative pseudo-regret `Σₛ Δ_{Iₛ}` of one run, sampled on a checkpoint grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    algorithm: String,
    environment: String,
    seed: u64,
    checkpoints: Vec<(u64, f64)>,
    grid: Vec<u64>,
    next_checkpoint: usize,
    last_round: u64,
    total: f64,
}

impl RegretTrace {
    /// An empty trace that will materialize the rounds of `grid` up to `horizon`.
    pub fn new(
        algorithm: impl Into<String>,
        environment: impl Into<String>,
        seed: u64,
        grid: &CheckpointGrid,
        horizon: u64,
    ) -> Self {
        Self::with_rounds(algorithm, environment, seed, grid.rounds(horizon))
    }

    /// An empty trace with an explicit, strictly increasing list of checkpoint rounds.
    pub fn with_rounds(
        algorithm: impl Into<String>,
        environment: impl Into<String>,
        seed: u64,
        mut rounds: Vec<u64>,
    ) -> Self {
        rounds.sort_unstable();
        rounds.dedup();
        Self {
            algorithm: algorithm.into(),
            environment: environment.into(),
            seed,
            checkpoints: Vec::new(),
            grid: rounds,
            next_checkpoint: 0,
            last_round: 0,
            total: 0.0,
        }
    }

    /// A trace assembled from precomputed checkpoints, e.g. regret measured
    /// against an arm that is only known once the run is over.
    pub fn from_checkpoints(
        algorithm: impl Into<String>,
        environment: impl Into<String>,
        seed: u64,
        checkpoints: Vec<(u64, f64)>,
    ) -> Result<Self> {
        let mut prev = 0;
        for &(t, _) in &checkpoints {
            if t <= prev {
                return Err(Error::NonConsecutiveRound {
                    expected: prev + 1,
                    got: t,
                });
            }
            prev = t;
        }
        let (last_round, total) = checkpoints.last().copied().unwrap_or((0, 0.0));
        Ok(Self {
            algorithm: algorithm.into(),
            environment: environment.into(),
            seed,
            grid: checkpoints.iter().map(|c| c.0).collect(),
            next_checkpoint: checkpoints.len(),
            checkpoints,
            last_round,
            total,
        })
    }

    /// Adds the gap of the arm played in round `t` to the running sum.
    pub fn record_round(&mut self, t: u64, chosen: usize, gaps: &GapVector) -> Result<()> {
        let gap = gaps.get(chosen)?;
        self.record_regret(t, gap)
    }

    /// Adds an arbitrary per-round regret increment for round `t`.
    pub fn record_regret(&mut self, t: u64, increment: f64) -> Result<()> {
        let expected = self.last_round + 1;
        if t != expected {
            return Err(Error::NonConsecutiveRound { expected, got: t });
        }
        self.total += increment;
        self.last_round = t;
        if self.grid.get(self.next_checkpoint) == Some(&t) {
            self.checkpoints.push((t, self.total));
            self.next_checkpoint += 1;
        }
        Ok(())
    }

    pub fn algorithm(&self) -> &str {
        &self.algorithm
    }

    pub fn environment(&self) -> &str {
        &self.environment
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Materialized `(round, cumulative pseudo-regret)` pairs.
    pub fn checkpoints(&self) -> &[(u64, f64)] {
        &self.checkpoints
    }

    /// Running sum after the last recorded round.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn last_round(&self) -> u64 {
        self.last_round
    }

    pub fn value_at(&self, t: u64) -> Option<f64> {
        self.checkpoints
            .binary_search_by_key(&t, |c| c.0)
            .ok()
            .map(|i| self.checkpoints[i].1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn gaps(values: &[f64]) -> GapVector {
        GapVector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn optimal_arm_adds_nothing() {
        let mut trace = RegretTrace::new("a", "e", 0, &CheckpointGrid::default(), 10);
        trace.record_round(1, 0, &gaps(&[0.0, 0.5])).unwrap();
        assert_eq!(trace.total(), 0.0);
    }

    #[test]
    fn suboptimal_arm_adds_its_gap() {
        let mut trace = RegretTrace::new("a", "e", 0, &CheckpointGrid::default(), 10);
        trace.record_round(1, 1, &gaps(&[0.0, 0.125])).unwrap();
        assert_eq!(trace.total(), 0.125);
    }

    #[test]
    fn running_sum_is_additive() {
        let g = gaps(&[0.0, 0.25]);
        let mut trace = RegretTrace::new("a", "e", 0, &CheckpointGrid::default(), 20);
        for t in 1..=8 {
            trace
                .record_regret(t, if t <= 2 { 0.25 } else { 0.0 })
                .unwrap();
        }
        assert_eq!(trace.total(), 0.5);
        trace.record_round(9, 1, &g).unwrap();
        assert_eq!(trace.total(), 0.75);
    }

    #[test]
    fn rejects_gaps_in_round_numbering_and_bad_arms() {
        let g = gaps(&[0.0, 0.25]);
        let mut trace = RegretTrace::new("a", "e", 0, &CheckpointGrid::default(), 20);
        assert_eq!(
            trace.record_round(2, 0, &g),
            Err(Error::NonConsecutiveRound {
                expected: 1,
                got: 2
            })
        );
        assert_eq!(
            trace.record_round(1, 2, &g),
            Err(Error::ArmOutOfRange { arm: 2, arms: 2 })
        );
    }

    #[test]
    fn grid_is_dense_then_twenty_per_decade() {
        let rounds = CheckpointGrid::default().rounds(100_000);
        assert_eq!(&rounds[..100], &(1..=100).collect::<Vec<_>>()[..]);
        assert!(rounds.contains(&1_000));
        assert!(rounds.contains(&10_000));
        assert_eq!(*rounds.last().unwrap(), 100_000);
        assert!(rounds.windows(2).all(|w| w[0] < w[1]));
        // 10^{41/20} = 112.20…
        assert_eq!(rounds[100], 113);
        // 100 dense rounds plus 20 per decade for the three decades above 100.
        assert_eq!(rounds.len(), 100 + 60);
    }

    #[test]
    fn grid_always_ends_at_horizon() {
        let rounds = CheckpointGrid::default().rounds(12_345);
        assert_eq!(*rounds.last().unwrap(), 12_345);
        assert!(CheckpointGrid::default().rounds(0).is_empty());
    }

    #[test]
    fn checkpoints_only_on_grid() {
        let grid = CheckpointGrid {
            dense_until: 2,
            per_decade: 1,
        };
        let mut trace = RegretTrace::new("a", "e", 7, &grid, 30);
        for t in 1..=30 {
            trace.record_regret(t, 1.0).unwrap();
        }
        assert_eq!(
            trace.checkpoints(),
            &[(1, 1.0), (2, 2.0), (10, 10.0), (30, 30.0)]
        );
        assert_eq!(trace.value_at(10), Some(10.0));
        assert_eq!(trace.value_at(11), None);
    }

    #[test]
    fn from_checkpoints_requires_increasing_rounds() {
        assert!(RegretTrace::from_checkpoints("a", "e", 0, vec![(1, 0.0), (1, 0.0)]).is_err());
        let t = RegretTrace::from_checkpoints("a", "e", 0, vec![(1, 0.5), (4, 1.0)]).unwrap();
        assert_eq!(t.total(), 1.0);
        assert_eq!(t.last_round(), 4);
    }
}
