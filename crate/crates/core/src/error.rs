use thiserror::Error;

/// Errors raised by the tree, model, configuration, contour and Gibbs routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {letter} out of range 1..={max}")]
    InvalidGenerator { letter: usize, max: usize },

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid ball: expected {expected} neighbor spins, got {got}")]
    InvalidBall { expected: usize, got: usize },

    #[error("invalid ball class: {0}")]
    InvalidClass(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no spin available at vertex \"{0}\" (incomplete boundary)")]
    IncompleteBoundary(String),

    #[error("configurations live on different volumes or boundaries")]
    VolumeMismatch,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid contour collection: {0}")]
    InvalidCollection(String),

    #[error("resource cap exceeded: {needed} configurations requested, cap is {cap}")]
    Resource { needed: u128, cap: u128 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
