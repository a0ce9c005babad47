use thiserror::Error;

/// Errors raised by the scalar, jet and solver layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("function value is zero at the expansion point; reciprocal undefined")]
    DivisionByZeroAtPoint,
    #[error("operation not representable exactly in rational mode: {0}")]
    UnsupportedInRationalMode(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("jets are expanded about different points")]
    MismatchedPoint,
    #[error("oracle returned order {available}, but order {required} is needed")]
    OracleOrderInsufficient { required: usize, available: usize },
    #[error("step undefined: T_{order} vanishes at the current point")]
    StepUndefined { order: usize },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("cannot parse `{0}` as a number")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
