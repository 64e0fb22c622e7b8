//! JSON experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tsallis_core::dueling::{DuelSpec, UtilitySegment};
use tsallis_core::env::{
    CorruptionStrategy, EnvironmentSpec, DEFAULT_GROWTH, DEFAULT_INITIAL_PHASE,
};
use tsallis_core::{CheckpointGrid, Estimator, GapVector, Schedule, TsallisConfig};

use crate::error::SimError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Used as the `env` column; derived from the environment when absent.
    #[serde(default)]
    pub name: Option<String>,
    pub environment: EnvConfig,
    pub algorithms: Vec<AlgorithmConfig>,
    pub horizon: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: u64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub checkpoints: CheckpointGrid,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_repetitions() -> u64 {
    20
}

/// Environment section. The `experiment1`, `multi_optimal` and `switching`
/// variants are shorthands for the corresponding stochastic specs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvConfig {
    Stochastic {
        means: Vec<f64>,
    },
    Experiment1 {
        arms: usize,
        gap: f64,
    },
    MultiOptimal {
        arms: usize,
    },
    Switching {
        arms: usize,
        gap: f64,
        #[serde(default = "default_initial_phase")]
        initial_phase: u64,
        #[serde(default = "default_growth")]
        growth: f64,
    },
    Corrupted {
        base: Box<EnvConfig>,
        budget: f64,
        #[serde(default)]
        strategy: CorruptionStrategy,
    },
    Dueling {
        utilities: Vec<f64>,
    },
    DuelingPiecewise {
        segments: Vec<UtilitySegment>,
    },
}

fn default_initial_phase() -> u64 {
    DEFAULT_INITIAL_PHASE
}

fn default_growth() -> f64 {
    DEFAULT_GROWTH
}

/// What a run actually simulates.
#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    Bandit(EnvironmentSpec),
    Dueling(DuelSpec),
}

impl Problem {
    pub fn arms(&self) -> usize {
        match self {
            Self::Bandit(spec) => spec.arms(),
            Self::Dueling(spec) => spec.arms(),
        }
    }

    /// Accounting gaps. For a dueling problem these are `max u − uᵢ` of the
    /// first segment.
    pub fn gaps(&self) -> Result<GapVector, SimError> {
        match self {
            Self::Bandit(spec) => Ok(spec.gaps()?),
            Self::Dueling(spec) => {
                let u = spec.utilities_at(1);
                let best = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Ok(GapVector::new(u.iter().map(|x| best - x).collect())?)
            }
        }
    }

    /// Gaps of the loss process a single learner faces. A Sparring learner
    /// loses against arm `j` with probability `(1 − uᵢ + uⱼ)/2`, so its gaps
    /// are half the utility gaps.
    pub fn learner_gaps(&self) -> Result<GapVector, SimError> {
        let gaps = self.gaps()?;
        match self {
            Self::Bandit(_) => Ok(gaps),
            Self::Dueling(_) => Ok(GapVector::new(
                gaps.as_slice().iter().map(|g| g / 2.0).collect(),
            )?),
        }
    }
}

impl EnvConfig {
    pub fn to_problem(&self) -> Result<Problem, SimError> {
        let problem = match self {
            Self::Dueling { utilities } => Problem::Dueling(DuelSpec::Stochastic {
                utilities: utilities.clone(),
            }),
            Self::DuelingPiecewise { segments } => Problem::Dueling(DuelSpec::Piecewise {
                segments: segments.clone(),
            }),
            _ => Problem::Bandit(self.to_bandit_spec()?),
        };
        match &problem {
            Problem::Bandit(spec) => spec.validate()?,
            Problem::Dueling(spec) => spec.validate()?,
        }
        Ok(problem)
    }

    fn to_bandit_spec(&self) -> Result<EnvironmentSpec, SimError> {
        Ok(match self {
            Self::Stochastic { means } => EnvironmentSpec::Stochastic {
                means: means.clone(),
            },
            Self::Experiment1 { arms, gap } => EnvironmentSpec::experiment1(*arms, *gap)?,
            Self::MultiOptimal { arms } => EnvironmentSpec::multi_optimal(*arms)?,
            Self::Switching {
                arms,
                gap,
                initial_phase,
                growth,
            } => EnvironmentSpec::Switching {
                arms: *arms,
                gap: *gap,
                initial_phase: *initial_phase,
                growth: *growth,
            },
            Self::Corrupted {
                base,
                budget,
                strategy,
            } => EnvironmentSpec::Corrupted {
                base: Box::new(base.to_bandit_spec()?),
                budget: *budget,
                strategy: *strategy,
            },
            Self::Dueling { .. } | Self::DuelingPiecewise { .. } => {
                return Err(SimError::Config(
                    "dueling environments cannot be nested".into(),
                ))
            }
        })
    }

    /// Short identifier used in output files.
    pub fn default_name(&self) -> String {
        match self {
            Self::Stochastic { means } => format!("stochastic-k{}", means.len()),
            Self::Experiment1 { arms, gap } => format!("experiment1-k{arms}-d{gap}"),
            Self::MultiOptimal { arms } => format!("multi-optimal-k{arms}"),
            Self::Switching { arms, gap, .. } => format!("switching-k{arms}-d{gap}"),
            Self::Corrupted { base, budget, .. } => {
                format!("{}-c{budget}", base.default_name())
            }
            Self::Dueling { utilities } => format!("dueling-k{}", utilities.len()),
            Self::DuelingPiecewise { segments } => format!(
                "dueling-piecewise-k{}",
                segments.first().map_or(0, |s| s.utilities.len())
            ),
        }
    }

    /// Corruption budget of the outermost layer, if any.
    pub fn corruption_budget(&self) -> Option<f64> {
        match self {
            Self::Corrupted { budget, .. } => Some(*budget),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgorithmConfig {
    Tsallis {
        #[serde(default)]
        label: Option<String>,
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default = "default_estimator")]
        estimator: Estimator,
        #[serde(default = "default_schedule")]
        schedule: Schedule,
        #[serde(default)]
        xi: Option<Vec<f64>>,
        /// Defaults to the environment's gaps for the gap-oracle schedule.
        #[serde(default)]
        oracle_gaps: Option<GapVector>,
    },
    Ucb1 {
        #[serde(default)]
        label: Option<String>,
        #[serde(default = "default_ucb_alpha")]
        alpha: f64,
    },
    Thompson {
        #[serde(default)]
        label: Option<String>,
    },
    Exp3 {
        #[serde(default)]
        label: Option<String>,
    },
}

fn default_alpha() -> f64 {
    0.5
}

fn default_estimator() -> Estimator {
    Estimator::ImportanceWeighted
}

fn default_schedule() -> Schedule {
    Schedule::InverseSqrt
}

fn default_ucb_alpha() -> f64 {
    tsallis_core::baselines::Ucb1::DEFAULT_ALPHA
}

impl AlgorithmConfig {
    /// α = ½ Tsallis-INF with the `c/√t` rate.
    pub fn tsallis_half(estimator: Estimator) -> Self {
        Self::Tsallis {
            label: None,
            alpha: 0.5,
            estimator,
            schedule: Schedule::InverseSqrt,
            xi: None,
            oracle_gaps: None,
        }
    }

    /// The `algorithm` column: the label when given, otherwise derived from
    /// the parameters.
    pub fn id(&self) -> String {
        match self {
            Self::Tsallis { label: Some(l), .. }
            | Self::Ucb1 { label: Some(l), .. }
            | Self::Thompson { label: Some(l) }
            | Self::Exp3 { label: Some(l) } => l.clone(),
            Self::Tsallis {
                alpha,
                estimator,
                schedule,
                ..
            } => match schedule {
                Schedule::InverseSqrt => format!("tsallis-inf-{}", estimator.short_name()),
                Schedule::Anytime => {
                    format!("tsallis-inf-{}-a{alpha}-anytime", estimator.short_name())
                }
                Schedule::GapOracle => {
                    format!("tsallis-inf-{}-a{alpha}-oracle", estimator.short_name())
                }
            },
            Self::Ucb1 { .. } => "ucb1".into(),
            Self::Thompson { .. } => "thompson".into(),
            Self::Exp3 { .. } => "exp3".into(),
        }
    }

    /// The learner configuration, with oracle gaps filled in from `gaps`.
    pub fn tsallis_config(&self, gaps: &GapVector) -> Option<TsallisConfig> {
        let Self::Tsallis {
            alpha,
            estimator,
            schedule,
            xi,
            oracle_gaps,
            ..
        } = self
        else {
            return None;
        };
        let oracle_gaps = match (schedule, oracle_gaps) {
            (Schedule::GapOracle, None) => Some(gaps.clone()),
            (_, g) => g.clone(),
        };
        Some(TsallisConfig {
            alpha: *alpha,
            estimator: *estimator,
            schedule: *schedule,
            xi: xi.clone(),
            oracle_gaps,
        })
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, SimError> {
        let text = std::fs::read_to_string(path).map_err(|source| SimError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.repetitions == 0 {
            return Err(SimError::Config("repetitions must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(SimError::Config("no algorithms configured".into()));
        }
        let mut ids: Vec<String> = self.algorithms.iter().map(AlgorithmConfig::id).collect();
        ids.sort();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(SimError::Config(
                "algorithm ids must be unique; add labels".into(),
            ));
        }
        let problem = self.environment.to_problem()?;
        let gaps = problem.learner_gaps()?;
        for alg in &self.algorithms {
            if let Some(cfg) = alg.tsallis_config(&gaps) {
                cfg.resolve_xi(problem.arms())?;
            }
        }
        Ok(())
    }

    pub fn env_id(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| self.environment.default_name())
    }
}
