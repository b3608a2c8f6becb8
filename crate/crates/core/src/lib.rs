//! Exact spectral analysis of thermal structure for diagonal states.
//!
//! The crate decides whether a diagonal state of a discrete-spectrum
//! Hamiltonian has the thermal (Gibbs) form `p_n ∝ exp(-beta * E_n)`, and it
//! certifies the answer either way:
//!
//! * [`state`] holds the exact state/spectrum algebra: inverse-temperature
//!   profiles, passivity, and the Gibbs decision itself.
//! * [`growth`] classifies eigenvalue growth families by whether
//!   `Tr exp(-beta H)` exists at a given `beta`.
//! * [`oscillator`] refutes non-thermal states: it couples the system to a
//!   three-mode oscillator bath whose frequencies are tuned so that no
//!   normalizable bath state can keep the joint state stationary, and emits
//!   an [`oscillator::InstabilityCertificate`] recording the construction.
//! * [`constraint`] is the underlying machinery: joint energy coincidences
//!   become ratio constraints on bath populations, solved exactly by a
//!   weighted union-find and cross-checked by a brute-force eliminator.
//! * [`counterexample`] builds the converse witnesses: bath families with too
//!   few modes that keep a non-thermal state perfectly consistent.
//! * [`certificate`] and [`json`] carry every verdict across the process
//!   boundary: typed certificates with deterministic JSON emission, and
//!   strict document parsing that names the offending field on error.
//!
//! All level energies and log-populations are exact rational coordinate
//! vectors over a declared generator basis ([`exact::Exact`]); verdicts never
//! depend on floating point except where the input itself is numeric.

pub mod basis;
pub mod certificate;
pub mod constraint;
pub mod counterexample;
pub mod error;
pub mod exact;
pub mod growth;
pub mod json;
pub mod oscillator;
pub mod rat;
pub mod spectrum;
pub mod state;

pub use basis::{Basis, Generator};
pub use error::Error;
pub use exact::Exact;
pub use rat::Rat;
pub use spectrum::{Level, Origin, Spectrum};
pub use state::{Beta, BetaEntry, BetaProfile, GibbsCheck, LogState, LogValue, Passivity};

/// Default relative tolerance for numeric comparisons of derived quantities.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative tolerance used when normalizing populations numerically.
pub const NORMALIZATION_TOL: f64 = 1e-12;
