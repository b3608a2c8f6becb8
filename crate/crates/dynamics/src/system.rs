//! Validated finite truncations: a Hamiltonian, a density matrix, and a
//! bounded observable of matching dimension.
//!
//! Every evolution and scan in this crate starts from a [`TruncatedSystem`],
//! so the invariants are enforced once, at construction: all three matrices
//! are Hermitian to machine precision, the state has unit trace and no
//! meaningfully negative eigenvalue, and the observable has operator norm at
//! most one. [`diagonal_embedding`] bridges from the exact side of the
//! workspace, turning a spectrum and a log-population state into diagonal
//! matrices with one slot per eigenvector.

use gibbsgate_core::{LogState, Spectrum};
use nalgebra::linalg::SymmetricEigen;
use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex<f64>;

/// Dense complex matrix used for Hamiltonians, states, and observables.
pub type CMatrix = DMatrix<C64>;

/// Hard cap on the dimension of a single truncated system.
pub const MAX_DIM: usize = 512;

/// Largest tolerated entrywise deviation from Hermitian symmetry.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Largest tolerated distance of the state's trace from one.
pub const TRACE_TOL: f64 = 1e-10;

/// Most negative state eigenvalue accepted as a rounding artifact.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Slack past operator norm one tolerated for the observable.
pub const NORM_SLACK: f64 = 1e-9;

/// Largest entrywise deviation from Hermitian symmetry: the maximum of
/// `|m[i,j] - conj(m[j,i])|` over all entries. Returns infinity when an
/// entry is not finite, so non-finite inputs always fail the check.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let e = m[(i, j)];
            if !(e.re.is_finite() && e.im.is_finite()) {
                return f64::INFINITY;
            }
            let d = (e - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Largest entry modulus of `a*b - b*a`; zero exactly when the two
/// matrices commute.
pub fn commutator_residual(a: &CMatrix, b: &CMatrix) -> f64 {
    let c = a * b - b * a;
    c.iter().fold(0.0_f64, |w, e| w.max(e.norm()))
}

fn require_square(name: &str, m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::invalid(format!(
            "{name} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

pub(crate) fn require_hermitian(name: &str, m: &CMatrix) -> Result<()> {
    let r = hermiticity_residual(m);
    if !(r < HERMITICITY_TOL) {
        return Err(Error::invalid(format!(
            "{name} is not Hermitian: residual {r:.3e} exceeds {HERMITICITY_TOL:.0e}"
        )));
    }
    Ok(())
}

fn state_eigenvalues(state: &CMatrix) -> Vec<f64> {
    SymmetricEigen::new(state.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

/// A finite system/state/observable triple with all invariants checked.
///
/// The observable is normalized to operator norm at most one so that every
/// expectation value is bounded by one in modulus; deviations reported by
/// the stability scans are therefore on an absolute scale.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSystem {
    dim: usize,
    hamiltonian: CMatrix,
    state: CMatrix,
    observable: CMatrix,
}

impl TruncatedSystem {
    /// Validates and assembles a triple.
    ///
    /// Checks, in order: matching square dimensions between one and
    /// [`MAX_DIM`]; Hermiticity of all three matrices within
    /// [`HERMITICITY_TOL`]; state trace within [`TRACE_TOL`] of one; state
    /// eigenvalues at least [`EIGENVALUE_FLOOR`]; observable operator norm
    /// at most one plus [`NORM_SLACK`].
    pub fn new(hamiltonian: CMatrix, state: CMatrix, observable: CMatrix) -> Result<Self> {
        let dim = require_square("hamiltonian", &hamiltonian)?;
        let sd = require_square("state", &state)?;
        let od = require_square("observable", &observable)?;
        if sd != dim || od != dim {
            return Err(Error::invalid(format!(
                "dimension mismatch: hamiltonian {dim}, state {sd}, observable {od}"
            )));
        }
        if dim == 0 {
            return Err(Error::invalid("system dimension must be at least 1"));
        }
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(format!(
                "system dimension {dim} exceeds the cap of {MAX_DIM}"
            )));
        }
        require_hermitian("hamiltonian", &hamiltonian)?;
        require_hermitian("state", &state)?;
        require_hermitian("observable", &observable)?;

        let trace_err = (state.trace() - C64::new(1.0, 0.0)).norm();
        if !(trace_err <= TRACE_TOL) {
            return Err(Error::invalid(format!(
                "state trace is off by {trace_err:.3e}, more than {TRACE_TOL:.0e} from 1"
            )));
        }
        let min_eig = state_eigenvalues(&state)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if !(min_eig >= EIGENVALUE_FLOOR) {
            return Err(Error::invalid(format!(
                "state has eigenvalue {min_eig:.3e} below the floor {EIGENVALUE_FLOOR:.0e}"
            )));
        }
        let norm = SymmetricEigen::new(observable.clone())
            .eigenvalues
            .iter()
            .fold(0.0_f64, |w, &x| w.max(x.abs()));
        if !(norm <= 1.0 + NORM_SLACK) {
            return Err(Error::invalid(format!(
                "observable operator norm {norm:.6} exceeds 1"
            )));
        }

        Ok(TruncatedSystem {
            dim,
            hamiltonian,
            state,
            observable,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn state(&self) -> &CMatrix {
        &self.state
    }

    pub fn observable(&self) -> &CMatrix {
        &self.observable
    }

    /// Unperturbed expectation value `Tr[O rho]`.
    ///
    /// The imaginary part is a pure rounding artifact for Hermitian `O` and
    /// `rho` and is discarded.
    pub fn baseline_expectation(&self) -> f64 {
        (&self.observable * &self.state).trace().re
    }
}

/// Rank-one projector onto the first basis vector; the default observable
/// for diagonal embeddings (ground-slot population).
pub fn ground_projector(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(0, 0)] = C64::new(1.0, 0.0);
    m
}

/// Embeds an exact spectrum and log-population state as diagonal matrices,
/// one slot per eigenvector: a level of multiplicity `m` contributes `m`
/// equal diagonal entries to both the Hamiltonian and the state. The state
/// is numerically normalized, so unnormalized log-populations are accepted.
pub fn diagonal_embedding(
    spec: &Spectrum,
    state: &LogState,
    observable: CMatrix,
) -> Result<TruncatedSystem> {
    let dim = spec.slot_count();
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge(format!(
            "spectrum has {dim} slots, more than the cap of {MAX_DIM}"
        )));
    }
    let pops = state
        .normalized_populations(spec)
        .map_err(|e| Error::invalid(e.to_string()))?;
    let basis = spec.basis();
    let mut energies = Vec::with_capacity(dim);
    let mut weights = Vec::with_capacity(dim);
    for (level, p) in spec.levels().iter().zip(&pops) {
        for _ in 0..level.mult {
            energies.push(C64::new(level.energy.eval(basis), 0.0));
            weights.push(C64::new(*p, 0.0));
        }
    }
    let hamiltonian = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(energies));
    let rho = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(weights));
    TruncatedSystem::new(hamiltonian, rho, observable)
}
