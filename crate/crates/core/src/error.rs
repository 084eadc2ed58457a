use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence `{label}` has nonpositive term {value} at index {index}")]
    NonPositiveTerm {
        label: String,
        index: usize,
        value: f64,
    },

    #[error("{map} index {index} out of range in degree {degree}")]
    IndexOutOfRange {
        map: &'static str,
        index: usize,
        degree: usize,
    },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("invalid simplex point: {0}")]
    InvalidPoint(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrices are not composable: {0}")]
    NotComposable(String),

    #[error("invalid module data: {0}")]
    InvalidModule(String),

    /// The inputs are well formed but violate the hypotheses of the
    /// requested computation (non-commuting projection, kernel at a path
    /// endpoint, non-idempotent projection, ...).
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureNonConvergence { estimate: f64, tolerance: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("malformed JSON: {0}")]
    Schema(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Error::Io(e.to_string())
        } else {
            Error::Schema(e.to_string())
        }
    }
}
