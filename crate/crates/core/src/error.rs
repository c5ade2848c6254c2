use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("map is unbounded: {0}")]
    Unbounded(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("element outside carrier: {0}")]
    InvalidElement(String),
    #[error("invalid radii: {0}")]
    InvalidRadii(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("map is not bounded on the family: {0}")]
    NotBounded(String),
    #[error("ring tag mismatch: {0}")]
    TagMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("exponent leaves the declared lattice: {0}")]
    LatticeOverflow(String),
    #[error("counterexample found: {0}")]
    CounterexampleFound(String),
    #[error("internal invariant violated: {0}")]
    InternalError(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by a failed mathematical check rather than bad input.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            Error::CounterexampleFound(_)
                | Error::NotBounded(_)
                | Error::Unbounded(_)
                | Error::InternalError(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
