use thiserror::Error;

/// Errors raised while building or evaluating the approximation and the
/// reference solutions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("epsilon bound violated: eps = {eps} exceeds R_min / 2 = {limit}")]
    EpsilonBound { eps: f64, limit: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("aliasing: {samples} samples cannot resolve order {order} (need at least {needed})")]
    Aliasing {
        samples: usize,
        order: usize,
        needed: usize,
    },

    #[error("point ({x}, {y}) is outside the closed perforated domain")]
    OutOfDomain { x: f64, y: f64 },

    #[error("exterior series evaluated at its own center")]
    AtCenter,

    #[error("point-source strength denominator is not positive ({0})")]
    Denominator(f64),

    #[error("mode {mode} system is near-singular (condition number {condition:e})")]
    IllConditioned { mode: usize, condition: f64 },

    #[error("{what}: Robin residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("maximum principle violated by {excess:e} at ({x}, {y})")]
    MaximumPrinciple { excess: f64, x: f64, y: f64 },

    #[error("no epsilon-halving pairs for kappa = {0}")]
    MissingPairs(f64),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
