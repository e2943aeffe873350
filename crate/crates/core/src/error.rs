use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid family spec: {0}")]
    InvalidSpec(String),

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("nondifferentiable point: {0}")]
    NondifferentiablePoint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coincident points")]
    CoincidentPoints,

    #[error("no admissible samples: {0}")]
    NoAdmissibleSamples(String),

    #[error("singular linear system")]
    SingularSystem,

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("time step {step}: {source}")]
    TimeStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
