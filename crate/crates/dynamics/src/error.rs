use thiserror::Error;

/// Error type shared by every routine in the crate.
///
/// `InvalidInput` marks matrices or parameters that fail validation and
/// `DimensionTooLarge` marks inputs past the hard size caps; both describe
/// caller mistakes (the CLI maps them to exit code 2). `Numeric` is reserved
/// for failures of the floating-point machinery itself — an eigensolver that
/// does not converge, or an expectation value whose imaginary residual
/// exceeds its bound — and maps to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension too large: {0}")]
    DimensionTooLarge(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
