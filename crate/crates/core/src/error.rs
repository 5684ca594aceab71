use thiserror::Error;

/// Errors produced by the IM-MOCZ library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("codebook index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("expected {expected} bits, got {got}")]
    BitLength { expected: usize, got: usize },
    #[error("bit {position} has value {value}, expected 0 or 1")]
    InvalidBit { position: usize, value: u8 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("degenerate polynomial: {0}")]
    DegeneratePolynomial(String),
    #[error("angle of the zero complex number is undefined")]
    UndefinedAngle,
    #[error("root finder failed: {0}")]
    RootFinding(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
