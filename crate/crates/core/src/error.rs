use thiserror::Error;

/// Errors reported by the arithmetic, algebra, and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} must be odd and positive")]
    InvalidModulus(i128),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("inverse of zero")]
    DivisionByZero,

    #[error("{0} is not a square in the field")]
    NotSquare(String),

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquareMatrix { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("malformed range: {0}")]
    Range(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
