use thiserror::Error;

use crate::poly::ModeIndex;

/// Errors raised by the Zernike toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZernikeError {
    /// A special-function argument lies outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A weight parameter is not admissible (must exceed -1).
    #[error("weight parameter {0} must be greater than -1")]
    Parameter(f64),
    /// Two operands carry different weight parameters.
    #[error("weight parameters differ: {0} vs {1}")]
    ParameterMismatch(f64, f64),
    /// A mode index was listed twice while constructing a polynomial.
    #[error("duplicate mode index {0}")]
    DuplicateMode(ModeIndex),
    /// The connection-coefficient formula is not supported at this parameter combination.
    #[error("unsupported parameter combination: {0}")]
    UnsupportedParameter(String),
    /// An integer argument is outside its admissible range.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A quadrature rule is not exact enough for the requested computation.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, ZernikeError>;
