//! Exit-code-bearing errors for the command-line layer.
//!
//! Exit 0 means a verdict was computed — negative physics verdicts
//! (instability, inconsistency) are successful analyses. Exit 2 marks
//! invalid input, with the message pointing at the offending file, field,
//! or flag. Exit 3 marks an internal cross-check failure (a certificate
//! failing its own soundness re-check, a numeric residual out of bounds, an
//! unknown certificate type) and must never occur in a correct build.

/// Exit code for malformed or out-of-domain input.
pub const EXIT_INVALID_INPUT: i32 = 2;

/// Exit code for internal cross-check failures.
pub const EXIT_INTERNAL: i32 = 3;

/// An error carrying the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVALID_INPUT,
            message: msg.into(),
        }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            message: msg.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<gibbsgate_core::Error> for CliError {
    fn from(e: gibbsgate_core::Error) -> Self {
        use gibbsgate_core::Error as E;
        let code = match &e {
            // A construction failing its own verification is an internal
            // soundness breach, not a caller mistake.
            E::InternalCheck(_) | E::ConstructionFailed(_) => EXIT_INTERNAL,
            _ => EXIT_INVALID_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<gibbsgate_dynamics::Error> for CliError {
    fn from(e: gibbsgate_dynamics::Error) -> Self {
        use gibbsgate_dynamics::Error as E;
        let code = match &e {
            E::Numeric(_) => EXIT_INTERNAL,
            _ => EXIT_INVALID_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
