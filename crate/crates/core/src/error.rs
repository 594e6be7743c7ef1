use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("divisor ball contains zero")]
    DivisorContainsZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("bound of {bits} bits exceeds the ceiling of {ceiling} bits")]
    Overflow { bits: u128, ceiling: u64 },
    #[error("precision demand unmet: inputs must be accurate to {required_bits} bits")]
    PrecisionDemandUnmet { required_bits: u64 },
    #[error("second polynomial must have lower degree in Y than the first")]
    DegreeOrder,
    #[error("coefficient oracle exhausted at {precision} bits without certification")]
    OracleExhausted { precision: u64 },
    #[error("instance refused: {0}")]
    InstanceTooLarge(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl Error {
    /// True for errors that mean "instance exceeds a configured ceiling"
    /// rather than "bad input".
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::Overflow { .. } | Error::OracleExhausted { .. } | Error::InstanceTooLarge(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
