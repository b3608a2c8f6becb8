//! Command-line front-end: load spectra, states, and environment
//! descriptions from JSON documents, dispatch the requested analysis, and
//! emit the resulting certificate as JSON or as a deterministic text report.
//!
//! Exit discipline: a computed verdict is a success (exit 0) even when the
//! verdict itself is negative — a refutation or an inconsistency is an
//! answer, not an error. Exit 2 flags invalid input with a pointer to the
//! offending field or flag; exit 3 flags an internal cross-check failure.

pub mod error;
pub mod inputs;
pub mod report;
pub mod run;
pub mod scenario;

pub use error::{CliError, Result, EXIT_INTERNAL, EXIT_INVALID_INPUT};
pub use report::render_report;
pub use run::run_command;
pub use scenario::{Cli, Command, CounterexampleMode, Format};

/// Runs one parsed invocation end to end and returns the text destined for
/// stdout. The certificate JSON is also written to `--out` when given,
/// regardless of the stdout format.
pub fn execute(cli: &Cli) -> Result<String> {
    let cert = run_command(&cli.command)?;
    let json_line = format!("{cert}\n");
    if let Some(path) = &cli.out {
        std::fs::write(path, &json_line).map_err(|e| {
            CliError::invalid(format!("--out {}: {e}", path.display()))
        })?;
    }
    match cli.format {
        Format::Json => Ok(json_line),
        Format::Text => render_report(&cert),
    }
}
