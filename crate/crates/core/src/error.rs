use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arm index {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },

    #[error("non-consecutive round: expected {expected}, got {got}")]
    NonConsecutiveRound { expected: u64, got: u64 },

    #[error("expected {expected} arms, got {got}")]
    ArmCountMismatch { expected: usize, got: usize },

    #[error("invalid weight vector: {0}")]
    InvalidWeights(&'static str),

    #[error("loss {0} outside [0, 1]")]
    InvalidLoss(f64),

    #[error("invalid gap vector: {0}")]
    InvalidGaps(&'static str),

    #[error("gap vector has no unique optimal arm")]
    NoUniqueOptimum,

    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("{solver} failed to normalize weights (residual {residual:e})")]
    SolverFailed { solver: &'static str, residual: f64 },
}
