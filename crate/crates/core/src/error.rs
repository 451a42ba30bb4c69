use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("truncation orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },
    #[error("coefficient index {index} exceeds truncation order {order}")]
    BeyondOrder { index: usize, order: usize },
    #[error("exp needs a series with zero constant term")]
    NonzeroConstantTerm,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational")]
    ParseRational(String),
    #[error("n = {n} is outside the supported range {min}..={max}")]
    OutOfRange { n: u32, min: u32, max: u32 },
    #[error("{0}")]
    Usage(String),
    #[error("degenerate estimate: {0}")]
    Degenerate(String),
    #[error("write failed: {0}")]
    Output(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
