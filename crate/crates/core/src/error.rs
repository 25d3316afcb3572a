use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("nonpositive coordinate {value} at index {index}")]
    NonPositive { index: usize, value: f64 },
    #[error("degenerate projection: <v, w> = 0")]
    DegenerateProjection,
    #[error("degenerate normal vector")]
    DegenerateNormal,
    #[error("point {0:?} is outside the domain")]
    OutOfDomain([f64; 3]),
    #[error("orbit reached the gasket guard after {steps} steps")]
    GasketGuard { steps: usize },
    #[error("iteration cap of {0} exceeded")]
    IterationCap(usize),
    #[error("word length {len} exceeds the limit {max}")]
    WordTooLong { len: usize, max: usize },
    #[error("parameter {name} = {value} outside {range}")]
    Parameter {
        name: &'static str,
        value: i64,
        range: &'static str,
    },
    #[error("quadrature did not converge (estimate {estimate}, error {error})")]
    Quadrature { estimate: f64, error: f64 },
    #[error("incidence product not positive within depth {0}")]
    NotPositive(usize),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("no admissible window found")]
    NoAdmissibleWindow,
    #[error("greedy billiard construction failed at prefix length {0}")]
    BilliardFailure(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
