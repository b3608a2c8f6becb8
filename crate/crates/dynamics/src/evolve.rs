//! Exact time evolution of expectation values under a weak perturbation.
//!
//! The perturbed Hamiltonian `H + lambda*V` is diagonalized once; the state
//! and observable are rotated into its eigenbasis, and the expectation value
//! at any time is then a finite sum of complex exponentials. No time
//! stepping is involved, so there is no discretization error and evaluation
//! at a single instant costs one pass over the nonzero frequency pairs.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::system::{require_hermitian, C64, CMatrix, TruncatedSystem};

/// Largest imaginary residual tolerated in an expectation value before the
/// evaluation is reported as a numeric failure.
pub const IMAG_TOL: f64 = 1e-9;

/// Coefficients smaller than this are dropped from the frequency sum; they
/// are far below every tolerance used by the scans.
const TERM_FLOOR: f64 = 1e-18;

/// A diagonalized evolution: everything needed to evaluate
/// `Tr[O rho(t)]` for the dynamics generated by `H + lambda*V`.
pub struct Propagator {
    /// Eigenvalues of the perturbed Hamiltonian, ascending.
    frequencies: DVector<f64>,
    /// Unitary whose columns are the corresponding eigenvectors.
    basis: CMatrix,
    /// State rotated into the perturbed eigenbasis.
    state_eig: CMatrix,
    /// `(coefficient, angular frequency)` pairs: the expectation value at
    /// time `t` is the real part of the sum of `c * exp(-i w t)`.
    terms: Vec<(C64, f64)>,
    /// Worst imaginary residual seen so far, for a single end-of-run check.
    worst_imag: std::cell::Cell<f64>,
}

impl Propagator {
    /// Diagonalizes `H + lambda*V` for a validated system.
    ///
    /// `perturbation` must be Hermitian within the same tolerance as the
    /// system matrices and `lambda` finite; the perturbation strength is
    /// otherwise unrestricted.
    pub fn new(sys: &TruncatedSystem, perturbation: &CMatrix, lambda: f64) -> Result<Self> {
        if perturbation.nrows() != sys.dim() || perturbation.ncols() != sys.dim() {
            return Err(Error::invalid(format!(
                "perturbation is {}x{} but the system has dimension {}",
                perturbation.nrows(),
                perturbation.ncols(),
                sys.dim()
            )));
        }
        require_hermitian("perturbation", perturbation)?;
        if !lambda.is_finite() {
            return Err(Error::invalid("coupling strength must be finite"));
        }
        Self::from_matrices(
            sys.hamiltonian(),
            sys.state(),
            sys.observable(),
            perturbation,
            lambda,
        )
    }

    /// Core constructor working on raw matrices. The caller guarantees the
    /// usual invariants (Hermiticity, trace, positivity); only finiteness of
    /// the assembled generator is re-checked, since `lambda*V` can overflow.
    pub(crate) fn from_matrices(
        hamiltonian: &CMatrix,
        state: &CMatrix,
        observable: &CMatrix,
        perturbation: &CMatrix,
        lambda: f64,
    ) -> Result<Self> {
        let generator = hamiltonian + perturbation * C64::new(lambda, 0.0);
        if generator
            .iter()
            .any(|e| !(e.re.is_finite() && e.im.is_finite()))
        {
            return Err(Error::invalid(
                "perturbed Hamiltonian has non-finite entries",
            ));
        }
        let eig = SymmetricEigen::new(generator);
        let basis = eig.eigenvectors;
        let frequencies = eig.eigenvalues;
        let state_eig = basis.adjoint() * state * &basis;
        let obs_eig = basis.adjoint() * observable * &basis;

        let n = frequencies.len();
        let mut terms = Vec::new();
        for j in 0..n {
            for k in 0..n {
                let c = obs_eig[(j, k)] * state_eig[(k, j)];
                if c.norm() >= TERM_FLOOR {
                    terms.push((c, frequencies[k] - frequencies[j]));
                }
            }
        }
        Ok(Propagator {
            frequencies,
            basis,
            state_eig,
            terms,
            worst_imag: std::cell::Cell::new(0.0),
        })
    }

    /// Expectation value `Tr[O rho(t)]`, discarding the imaginary rounding
    /// residual but remembering the worst one seen (see
    /// [`Propagator::check_residual`]).
    pub fn expectation(&self, t: f64) -> f64 {
        let mut sum = C64::new(0.0, 0.0);
        for &(c, w) in &self.terms {
            let (s, cos) = (w * t).sin_cos();
            sum += c * C64::new(cos, -s);
        }
        if sum.im.abs() > self.worst_imag.get() {
            self.worst_imag.set(sum.im.abs());
        }
        sum.re
    }

    /// Fails if any expectation evaluated so far carried an imaginary part
    /// above [`IMAG_TOL`] — a sign the eigendecomposition lost Hermiticity.
    pub fn check_residual(&self) -> Result<()> {
        let worst = self.worst_imag.get();
        if worst > IMAG_TOL {
            return Err(Error::numeric(format!(
                "expectation value has imaginary residual {worst:.3e}, above {IMAG_TOL:.0e}"
            )));
        }
        Ok(())
    }

    /// The evolved density matrix `rho(t)`, materialized in the original
    /// basis. Used by invariance checks; expectation values never need it.
    pub fn state_at(&self, t: f64) -> CMatrix {
        let n = self.frequencies.len();
        let mut rotated = self.state_eig.clone();
        for j in 0..n {
            for k in 0..n {
                let w = self.frequencies[j] - self.frequencies[k];
                let (s, cos) = (w * t).sin_cos();
                rotated[(j, k)] *= C64::new(cos, -s);
            }
        }
        &self.basis * rotated * self.basis.adjoint()
    }
}

fn require_times(times: &[f64]) -> Result<()> {
    for (i, &t) in times.iter().enumerate() {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::invalid(format!(
                "times[{i}] = {t} must be finite and non-negative"
            )));
        }
        if i > 0 && t < times[i - 1] {
            return Err(Error::invalid(format!(
                "times must be sorted ascending, but times[{i}] = {t} follows {}",
                times[i - 1]
            )));
        }
    }
    Ok(())
}

/// Expectation values `Tr[O rho(t)]` for dynamics generated by
/// `H + lambda*V`, at a sorted list of non-negative times.
pub fn evolve_expectation(
    sys: &TruncatedSystem,
    perturbation: &CMatrix,
    lambda: f64,
    times: &[f64],
) -> Result<Vec<f64>> {
    require_times(times)?;
    let prop = Propagator::new(sys, perturbation, lambda)?;
    let values: Vec<f64> = times.iter().map(|&t| prop.expectation(t)).collect();
    prop.check_residual()?;
    Ok(values)
}

/// The evolved density matrix at a single non-negative time, for callers
/// that want to inspect invariants of the evolution itself.
pub fn evolve_state(
    sys: &TruncatedSystem,
    perturbation: &CMatrix,
    lambda: f64,
    t: f64,
) -> Result<CMatrix> {
    require_times(std::slice::from_ref(&t))?;
    let prop = Propagator::new(sys, perturbation, lambda)?;
    Ok(prop.state_at(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::linalg::SymmetricEigen;
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag(entries: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_vec(
            entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
        ))
    }

    fn pauli_x() -> CMatrix {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        m[(1, 0)] = C64::new(1.0, 0.0);
        m
    }

    fn rabi_system() -> TruncatedSystem {
        TruncatedSystem::new(diag(&[0.0, 1.0]), diag(&[1.0, 0.0]), diag(&[1.0, 0.0]))
            .expect("two-level system is valid")
    }

    /// Ground-state survival probability for a two-level system with gap 1
    /// coupled by `lambda * sigma_x`.
    fn rabi_survival(lambda: f64, t: f64) -> f64 {
        let h2 = lambda * lambda + 0.25;
        1.0 - lambda * lambda / h2 * (h2.sqrt() * t).sin().powi(2)
    }

    #[test]
    fn rabi_oscillation_matches_closed_form() {
        let sys = rabi_system();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let lambda: f64 = rng.gen_range(0.01..1.0);
            let t: f64 = rng.gen_range(0.0..50.0);
            let got = evolve_expectation(&sys, &pauli_x(), lambda, &[t])
                .expect("two-level evolution succeeds")[0];
            let want = rabi_survival(lambda, t);
            assert!(
                (got - want).abs() < 1e-9,
                "survival probability at lambda={lambda}, t={t}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn zero_coupling_is_an_exact_fixed_point() {
        let sys = TruncatedSystem::new(
            diag(&[0.0, 1.0, 2.0]),
            diag(&[0.7, 0.2, 0.1]),
            diag(&[1.0, 0.0, 0.0]),
        )
        .expect("three-level system is valid");
        let mut v = CMatrix::zeros(3, 3);
        v[(0, 2)] = C64::new(0.3, 0.4);
        v[(2, 0)] = C64::new(0.3, -0.4);
        v[(1, 1)] = C64::new(0.9, 0.0);
        let times: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let vals =
            evolve_expectation(&sys, &v, 0.0, &times).expect("uncoupled evolution succeeds");
        for (i, val) in vals.iter().enumerate() {
            assert!(
                (val - 0.7).abs() < 1e-12,
                "stationary expectation moved to {val} at times[{i}]"
            );
        }
    }

    #[test]
    fn commuting_perturbation_leaves_diagonal_state_fixed() {
        let sys = TruncatedSystem::new(
            diag(&[0.0, 1.0, 3.0]),
            diag(&[0.5, 0.3, 0.2]),
            diag(&[0.0, 1.0, 0.0]),
        )
        .expect("three-level system is valid");
        let v = diag(&[0.2, -0.9, 0.4]);
        let times = [0.0, 2.5, 7.0, 31.0];
        let vals =
            evolve_expectation(&sys, &v, 0.8, &times).expect("diagonal evolution succeeds");
        for val in &vals {
            assert!(
                (val - 0.3).abs() < 1e-12,
                "a commuting perturbation must not move a diagonal state, got {val}"
            );
        }
    }

    #[test]
    fn maximally_mixed_state_is_invisible_to_any_perturbation() {
        let sys = TruncatedSystem::new(
            diag(&[0.0, 1.0]),
            diag(&[0.5, 0.5]),
            diag(&[1.0, -1.0]),
        )
        .expect("two-level system is valid");
        let times: Vec<f64> = (0..50).map(|i| 0.3 * i as f64).collect();
        let vals =
            evolve_expectation(&sys, &pauli_x(), 0.7, &times).expect("evolution succeeds");
        for val in &vals {
            assert!(
                val.abs() < 1e-12,
                "the maximally mixed state commutes with everything, got deviation {val}"
            );
        }
    }

    #[test]
    fn evolution_preserves_trace_and_spectrum() {
        let sys = rabi_system();
        for &t in &[0.4, 3.7, 19.0] {
            let rho_t = evolve_state(&sys, &pauli_x(), 0.6, t).expect("evolution succeeds");
            let trace = rho_t.trace();
            assert!(
                (trace.re - 1.0).abs() < 1e-9 && trace.im.abs() < 1e-9,
                "trace drifted to {trace} at t={t}"
            );
            let mut eigs: Vec<f64> = SymmetricEigen::new(rho_t)
                .eigenvalues
                .iter()
                .copied()
                .collect();
            eigs.sort_by(f64::total_cmp);
            let want = [0.0, 1.0];
            for (got, want) in eigs.iter().zip(want) {
                assert!(
                    (got - want).abs() < 1e-9,
                    "eigenvalue drifted to {got} (want {want}) at t={t}"
                );
            }
        }
    }

    #[test]
    fn rejects_unsorted_or_negative_times() {
        let sys = rabi_system();
        let err = evolve_expectation(&sys, &pauli_x(), 0.1, &[0.0, 2.0, 1.0])
            .expect_err("descending times must be rejected");
        assert!(
            err.to_string().contains("sorted"),
            "error should mention ordering: {err}"
        );
        let err = evolve_expectation(&sys, &pauli_x(), 0.1, &[-1.0])
            .expect_err("negative time must be rejected");
        assert!(
            err.to_string().contains("non-negative"),
            "error should mention the sign: {err}"
        );
    }

    #[test]
    fn rejects_non_hermitian_perturbation() {
        let sys = rabi_system();
        let mut v = CMatrix::zeros(2, 2);
        v[(0, 1)] = C64::new(1.0, 0.0);
        let err = evolve_expectation(&sys, &v, 0.1, &[1.0])
            .expect_err("a one-sided hop must be rejected");
        assert!(
            err.to_string().contains("perturbation"),
            "error should name the perturbation: {err}"
        );
    }
}
