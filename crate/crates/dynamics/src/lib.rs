//! Numerical side of the workspace: finite truncations, exact eigenbasis
//! time evolution, and weak-coupling stability scans.
//!
//! The exact crate decides whether a diagonal state *can* be stable under
//! second-order perturbations; this crate watches the dynamics actually
//! happen on finite matrices. Its pieces:
//!
//! - [`system`]: validated Hamiltonian/state/observable triples
//!   ([`TruncatedSystem`]) and the diagonal embedding of exact spectra.
//! - [`evolve`]: expectation values under `H + lambda*V`, computed in the
//!   perturbed eigenbasis with no time-stepping error.
//! - [`scan`]: supremum deviations across shrinking couplings and their
//!   classification (decays, persists, or inconclusive).
//! - [`marginal`]: consistency of the dynamics under an uncoupled
//!   spectator factor.

pub mod error;
pub mod evolve;
pub mod marginal;
pub mod scan;
pub mod system;

pub use error::{Error, Result};
pub use evolve::{evolve_expectation, evolve_state, Propagator, IMAG_TOL};
pub use marginal::{marginal_stability_check, MarginalOutcome, MAX_JOINT_DIM};
pub use scan::{
    first_order_stability_scan, scan_report_value, ScanVerdict, StabilityScan, GRID_POINTS,
};
pub use system::{
    diagonal_embedding, ground_projector, hermiticity_residual, TruncatedSystem, C64, CMatrix,
    MAX_DIM,
};
