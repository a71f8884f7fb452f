use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("steady state is not unique: generator kernel has dimension {dimension}")]
    NonUniqueSteadyState { dimension: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("resolvent is singular at detuning {detuning}")]
    SingularResolvent { detuning: f64 },

    #[error(
        "correlation window too short: fluctuations decayed only to {residual:e} \
         (relative) at tau = {tau_max}"
    )]
    InsufficientWindow { tau_max: f64, residual: f64 },

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
