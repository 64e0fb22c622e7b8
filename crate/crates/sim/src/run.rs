//! One seeded run of one algorithm.

use std::fmt;

use rand_chacha::ChaCha8Rng;
use tsallis_core::baselines::{Exp3, Thompson, Ucb1};
use tsallis_core::dueling::{DuelSpec, Sparring};
use tsallis_core::env::{Environment, EnvironmentSpec};
use tsallis_core::{GapVector, Policy, RegretTrace, TsallisLearner};

use crate::config::{AlgorithmConfig, ExperimentConfig, Problem};
use crate::rng::{stream, Role};

pub type BoxedPolicy = Box<dyn Policy + Send>;

/// Builds a fresh learner. `gaps` fills in oracle gaps that the config leaves out.
pub fn build_policy(
    alg: &AlgorithmConfig,
    arms: usize,
    gaps: &GapVector,
) -> tsallis_core::Result<BoxedPolicy> {
    Ok(match alg {
        AlgorithmConfig::Tsallis { .. } => {
            let cfg = alg.tsallis_config(gaps).expect("tsallis variant");
            Box::new(TsallisLearner::new(cfg, arms)?)
        }
        AlgorithmConfig::Ucb1 { alpha, .. } => Box::new(Ucb1::with_alpha(arms, *alpha)),
        AlgorithmConfig::Thompson { .. } => Box::new(Thompson::new(arms)),
        AlgorithmConfig::Exp3 { .. } => Box::new(Exp3::new(arms)),
    })
}

/// Corruption charged by the environment next to an independent recount
/// from the logged (clean, served) loss pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorruptionLedger {
    pub budget: f64,
    pub charged: f64,
    pub recomputed: f64,
}

impl CorruptionLedger {
    pub fn within_budget(&self) -> bool {
        self.recomputed <= self.budget && self.charged <= self.budget
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DuelCheck {
    pub rounds: u64,
    /// Rounds where the two learners' losses did not sum to 1.
    pub complement_violations: u64,
    /// Arm the regret is measured against.
    pub reference_arm: usize,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub trace: RegretTrace,
    pub corruption: Option<CorruptionLedger>,
    pub duel: Option<DuelCheck>,
}

/// A run that stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub algorithm: String,
    pub seed: u64,
    /// 0 when the run failed before its first round.
    pub round: u64,
    pub message: String,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (seed {}) failed at round {}: {}",
            self.algorithm, self.seed, self.round, self.message
        )
    }
}

impl std::error::Error for RunFailure {}

/// Runs algorithm `algorithm` of `config` with seed `base_seed + run`.
pub fn run_single(
    config: &ExperimentConfig,
    algorithm: usize,
    run: u64,
) -> Result<RunReport, RunFailure> {
    let alg = &config.algorithms[algorithm];
    let alg_id = alg.id();
    let seed = config.base_seed.wrapping_add(run);
    let fail = |round: u64, message: String| RunFailure {
        algorithm: alg_id.clone(),
        seed,
        round,
        message,
    };
    let problem = config
        .environment
        .to_problem()
        .map_err(|e| fail(0, e.to_string()))?;
    let trace = RegretTrace::new(
        alg_id.clone(),
        config.env_id(),
        seed,
        &config.checkpoints,
        config.horizon,
    );
    match problem {
        Problem::Bandit(spec) => run_bandit(spec, alg, trace, config.horizon, &fail),
        Problem::Dueling(spec) => run_dueling(spec, alg, trace, config.horizon, &fail),
    }
}

fn run_bandit(
    spec: EnvironmentSpec,
    alg: &AlgorithmConfig,
    mut trace: RegretTrace,
    horizon: u64,
    fail: &dyn Fn(u64, String) -> RunFailure,
) -> Result<RunReport, RunFailure> {
    let budget = match &spec {
        EnvironmentSpec::Corrupted { budget, .. } => Some(*budget),
        _ => None,
    };
    let mut env = Environment::new(spec).map_err(|e| fail(0, e.to_string()))?;
    let gaps = env.gaps().clone();
    let mut policy = build_policy(alg, env.arms(), &gaps).map_err(|e| fail(0, e.to_string()))?;
    let (mut env_rng, mut rng) = rngs(&trace, Role::LearnerLeft);
    let mut recomputed = 0.0;
    for t in 1..=horizon {
        let losses = env.step_logged(&mut env_rng);
        let step = |policy: &mut BoxedPolicy, rng: &mut ChaCha8Rng| {
            let arm = policy.select(rng)?;
            policy.observe(arm, losses.served.as_slice()[arm], rng)?;
            Ok::<_, tsallis_core::Error>(arm)
        };
        let arm = step(&mut policy, &mut rng).map_err(|e| fail(t, e.to_string()))?;
        trace
            .record_round(t, arm, &gaps)
            .map_err(|e| fail(t, e.to_string()))?;
        recomputed += losses.clean.sup_distance(&losses.served);
    }
    Ok(RunReport {
        trace,
        corruption: budget.map(|budget| CorruptionLedger {
            budget,
            charged: env.state().corruption_spent,
            recomputed,
        }),
        duel: None,
    })
}

/// Arm with the largest total utility over rounds `1..=horizon` (first on ties).
pub fn hindsight_arm(spec: &DuelSpec, horizon: u64) -> usize {
    let mut totals = vec![0.0; spec.arms()];
    match spec {
        DuelSpec::Stochastic { utilities } => totals.clone_from(utilities),
        DuelSpec::Piecewise { .. } => {
            for t in 1..=horizon.max(1) {
                for (acc, u) in totals.iter_mut().zip(spec.utilities_at(t)) {
                    *acc += u;
                }
            }
        }
    }
    let mut best = 0;
    for (i, &v) in totals.iter().enumerate() {
        if v > totals[best] {
            best = i;
        }
    }
    best
}

fn run_dueling(
    spec: DuelSpec,
    alg: &AlgorithmConfig,
    mut trace: RegretTrace,
    horizon: u64,
    fail: &dyn Fn(u64, String) -> RunFailure,
) -> Result<RunReport, RunFailure> {
    let problem = Problem::Dueling(spec.clone());
    let gaps = problem.learner_gaps().map_err(|e| fail(0, e.to_string()))?;
    let arms = spec.arms();
    let build = || build_policy(alg, arms, &gaps).map_err(|e| fail(0, e.to_string()));
    let mut sparring = Sparring::new(build()?, build()?).map_err(|e| fail(0, e.to_string()))?;
    let (mut duel_rng, mut left_rng) = rngs(&trace, Role::LearnerLeft);
    let (_, mut right_rng) = rngs(&trace, Role::LearnerRight);
    let reference = hindsight_arm(&spec, horizon);
    let mut violations = 0;
    for t in 1..=horizon {
        let round = sparring
            .play_round(&spec, &mut duel_rng, &mut left_rng, &mut right_rng)
            .map_err(|e| fail(t, e.to_string()))?;
        if round.left_loss + round.right_loss != 1.0 {
            violations += 1;
        }
        let u = spec.utilities_at(t);
        let increment = 2.0 * u[reference] - (u[round.left_arm] + u[round.right_arm]);
        trace
            .record_regret(t, increment)
            .map_err(|e| fail(t, e.to_string()))?;
    }
    Ok(RunReport {
        trace,
        corruption: None,
        duel: Some(DuelCheck {
            rounds: horizon,
            complement_violations: violations,
            reference_arm: reference,
        }),
    })
}

fn rngs(trace: &RegretTrace, learner: Role) -> (ChaCha8Rng, ChaCha8Rng) {
    (
        stream(trace.seed(), trace.algorithm(), Role::Env),
        stream(trace.seed(), trace.algorithm(), learner),
    )
}
