use thiserror::Error;

/// Everything that can go wrong in the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("invalid state: {0}")]
    InvalidState(&'static str),
    #[error("filaments overlap: (r1 - r2)^2 + (z1 - z2)^2 = 0")]
    SeparationZero,
    #[error("state lies on the excluded line W = 0 of the gamma = 1 phase space")]
    OnSingularLine,
    #[error("hamiltonian diverges at W = 0 when gamma = 1")]
    Divergent,
    #[error("point is off the hamiltonian level set (bracket = {bracket:e})")]
    OffLevelSet { bracket: f64 },
    #[error("radii are inconsistent with the hyperbola gamma*r1^2 - r2^2 = d")]
    InversionFailure,
    #[error("domain error: {0}")]
    DomainError(&'static str),
    #[error("wrong regime: {0}")]
    RegimeError(&'static str),
    #[error("root finder failed: {0}")]
    RootNotFound(&'static str),
    #[error("invalid initial state: {0}")]
    InvalidInitialState(&'static str),
    #[error("step limit of {limit} exceeded at t = {t}")]
    StepLimitExceeded { limit: u64, t: f64 },
    #[error("trajectory is empty")]
    EmptyTrajectory,
}

pub type Result<T> = core::result::Result<T, Error>;
