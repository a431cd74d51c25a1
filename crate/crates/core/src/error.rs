use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a nonzero integer")]
    Zero,
    #[error("|{0}| exceeds the factorization limit of 10^18")]
    TooLarge(String),
    #[error("radicand must not be 0 or 1")]
    TrivialRadicand,
    #[error("{0} is not squarefree")]
    NotSquarefree(String),
    #[error("conductor must be a positive integer, got {0}")]
    BadConductor(String),
    #[error("{0} is not the discriminant of a quadratic order")]
    NotADiscriminant(String),
    #[error("invalid CM point: {0}")]
    InvalidTau(String),
    #[error("discriminant must be negative and ≡ 1 (mod 4), got {0}")]
    BadDiscriminant(String),
    #[error("beta must be a positive odd integer, got {0}")]
    BadBeta(String),
    #[error("{divisor} does not divide {n}")]
    NotADivisor { divisor: String, n: String },
    #[error("elements lie in different quadratic fields")]
    FieldMismatch,
    #[error("lattice generators are linearly dependent over Q")]
    DegenerateLattice,
    #[error("matrix is not in GL2(Z_(2))+: {0}")]
    NotInG(String),
    #[error("u·L1 is not contained in L2")]
    NotASublattice,
    #[error("multiplier must be nonzero")]
    ZeroMultiplier,
    #[error("j-invariant of the point is not real")]
    NotRealJ,
    #[error("bad base point: {0}")]
    BadBase(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid point of the upper half-plane: {0}")]
    InvalidPoint(String),
    /// A proven invariant failed numerically or exactly; indicates a defect.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures that signal a defect rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
