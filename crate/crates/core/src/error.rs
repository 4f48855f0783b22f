use thiserror::Error;

/// Errors shared by the whole engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero input to {0}")]
    ZeroInput(&'static str),

    /// An operation that would need more p-adic digits than the ring carries.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("degree cap exceeded during coordinate change: {0}")]
    DegreeCap(String),

    /// A characteristic-zero special divisor makes a psi-sum meaningless.
    #[error("characteristic-zero special divisor present; use l0_direct on the split part ({0})")]
    SpecialDivisor(String),

    /// An asymptotic estimate did not land near an integer.
    #[error("estimation failure: {0}")]
    Estimation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
