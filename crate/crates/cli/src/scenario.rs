//! Command-line scenario definitions: one subcommand per analysis, plus the
//! common output flags.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Top-level argument structure.
#[derive(Debug, Parser)]
#[command(
    name = "gibbsgate",
    version,
    about = "Decides and certifies the thermal structure of diagonal states: \
             exact refutations, counterexample constructions, and numerical \
             stability scans"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Also write the certificate JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// What to print on stdout: the rendered report or the raw certificate.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Stdout format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Number of environment modes in a counterexample construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CounterexampleMode {
    One,
    Two,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the Gibbs weight sum converges for a spectral growth
    /// family at a given inverse temperature.
    Existence {
        /// Growth family document (JSON).
        family: PathBuf,
        /// Inverse temperature, a rational like "1/2".
        #[arg(long)]
        beta: String,
        /// Probe window for callback families (closed forms ignore it).
        #[arg(long, default_value_t = 1024)]
        window: u32,
    },

    /// Passivity, the per-level inverse-temperature profile, and the
    /// thermal-form check for a spectrum/state pair.
    Analyze {
        spectrum: PathBuf,
        state: PathBuf,
        /// Tolerance for comparing numeric temperature entries.
        #[arg(long)]
        tol: Option<f64>,
    },

    /// Prove or refute the thermal form: an exact temperature, an
    /// instability certificate, or a structure violation.
    Refute { spectrum: PathBuf, state: PathBuf },

    /// Solve the joint-degeneracy constraints against an oscillator
    /// environment and classify the solved state's summability.
    VerifyEnv {
        spectrum: PathBuf,
        state: PathBuf,
        /// Environment description (JSON: mode frequencies and truncations).
        env: PathBuf,
        /// Override the environment truncations.
        #[arg(long, value_name = "N[,M,K]")]
        trunc: Option<String>,
    },

    /// Construct a stable-but-not-thermal environment table.
    Counterexample {
        /// Number of environment modes.
        #[arg(long, value_enum)]
        mode: CounterexampleMode,
        spectrum: PathBuf,
        state: PathBuf,
        /// Environment description (JSON: mode frequency or frequencies,
        /// and for two modes the base decay and optional lattice vectors).
        env: PathBuf,
        /// Levels per environment mode.
        #[arg(long, value_name = "N", default_value_t = 8)]
        trunc: usize,
    },

    /// Temperature forcing between two commensurable gaps.
    Commensurable {
        spectrum: PathBuf,
        state: PathBuf,
        /// Level pair "m,n" whose gaps are compared.
        #[arg(long, default_value = "1,2", value_name = "M,N")]
        pair: String,
    },

    /// Numerically scan the embedded diagonal state's stability under a
    /// bounded perturbation across shrinking couplings.
    Simulate {
        spectrum: PathBuf,
        state: PathBuf,
        /// Perturbation matrix document (JSON).
        perturbation: PathBuf,
        /// Observable matrix document; ground-slot projector when absent.
        #[arg(long, value_name = "FILE")]
        observable: Option<PathBuf>,
        /// Coupling strengths, strictly decreasing.
        #[arg(long, default_value = "0.2,0.1,0.05,0.025", value_name = "L1,L2,...")]
        lambdas: String,
    },
}
