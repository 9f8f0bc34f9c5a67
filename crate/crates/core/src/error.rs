use alloc::string::String;
use core::fmt;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A generator index outside `1..=rank`.
    GeneratorOutOfRange { index: usize, rank: usize },
    /// Two objects that must share a free-group rank do not.
    RankMismatch { expected: usize, found: usize },
    /// Matrix shapes are incompatible for the requested operation.
    DimensionMismatch(String),
    /// Text input that could not be parsed.
    Parse(String),
    /// A representation that is not a permutation/unitary representation
    /// of the mapping-torus group, or whose `z` image is singular.
    InvalidRepresentation(String),
    /// A sequence too short for the requested estimate.
    SequenceTooShort { needed: usize, found: usize },
    /// A torus matrix with an eigenvalue of modulus one.
    NotHyperbolic(String),
    /// `A^n - I` is singular, so fixed points are not isolated.
    NonIsolatedFixedPoints { n: u32 },
    /// Missing data, e.g. a divisor without a dimension or an iterate
    /// without component data.
    MissingData(String),
    /// Invalid input that violates a documented precondition.
    Precondition(String),
    /// Two independent computations disagree. Signals a bug, not user error.
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GeneratorOutOfRange { index, rank } => {
                write!(f, "generator index {index} out of range for rank {rank}")
            }
            Error::RankMismatch { expected, found } => {
                write!(f, "rank mismatch: expected {expected}, found {found}")
            }
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvalidRepresentation(msg) => write!(f, "invalid representation: {msg}"),
            Error::SequenceTooShort { needed, found } => {
                write!(f, "sequence too short: need at least {needed} terms, got {found}")
            }
            Error::NotHyperbolic(msg) => write!(f, "matrix is not hyperbolic: {msg}"),
            Error::NonIsolatedFixedPoints { n } => {
                write!(
                    f,
                    "A^{n} - I is singular; fixed points of the {n}-th iterate are not isolated"
                )
            }
            Error::MissingData(msg) => write!(f, "missing data: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Internal(msg) => write!(f, "internal consistency failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
