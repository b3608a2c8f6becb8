use thiserror::Error;

/// Error type shared by every analysis in the crate.
///
/// `InvalidInput` marks data the caller handed in that fails validation;
/// `Precondition` marks structurally valid data outside an operation's domain
/// (the distinction matters to the CLI, which maps both to exit code 2).
/// `InternalCheck` is reserved for self-verification failures of emitted
/// certificates and maps to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("attack unsupported for this pair: {0}")]
    UnsupportedAttackPair(String),

    #[error("no lattice representation found: {0}")]
    NoLatticeRepresentation(String),

    #[error("construction failed verification: {0}")]
    ConstructionFailed(String),

    #[error("truncation too large: {0}")]
    TruncationTooLarge(String),

    #[error("internal cross-check failed: {0}")]
    InternalCheck(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::InternalCheck(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
