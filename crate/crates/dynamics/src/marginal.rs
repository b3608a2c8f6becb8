//! Spectator-factor consistency: coupling a perturbation to one factor of a
//! product state must drive the same marginal dynamics whether or not the
//! uncoupled second factor is carried along.
//!
//! The check lifts system A's perturbation and observable to the joint
//! space (`V ⊗ 1`, `O ⊗ 1`), evolves the product state under
//! `H_A ⊗ 1 + 1 ⊗ H_B + lambda V ⊗ 1`, and compares the joint expectation
//! against the bare system-A expectation pointwise on the same time grid
//! used by the stability scans.

use crate::error::{Error, Result};
use crate::evolve::Propagator;
use crate::scan::{require_couplings, time_grid, HORIZON_FACTOR};
use crate::system::{CMatrix, TruncatedSystem};

/// Hard cap on the joint dimension of a two-factor check.
pub const MAX_JOINT_DIM: usize = 4096;

/// Largest pointwise disagreement tolerated between the joint and marginal
/// expectation values.
pub const MARGINAL_TOL: f64 = 1e-10;

/// Outcome of a marginal consistency check.
#[derive(Debug, Clone, PartialEq)]
pub enum MarginalOutcome {
    /// Joint and marginal expectations agree within [`MARGINAL_TOL`] at
    /// every grid point of every coupling; the worst disagreement is
    /// reported.
    Verified { max_discrepancy: f64 },
    /// First grid point where the two sides disagreed beyond the
    /// tolerance.
    Failed {
        lambda: f64,
        time: f64,
        discrepancy: f64,
    },
}

/// Compares system A's perturbed dynamics against the same dynamics run on
/// the joint space with an uncoupled spectator factor B.
///
/// Both factors must be valid systems on their own; the joint dimension is
/// capped at [`MAX_JOINT_DIM`]. The lifted matrices are built here, so the
/// joint-side invariants (Hermiticity, unit trace, positivity, unit
/// observable norm) hold by construction and are not re-verified.
pub fn marginal_stability_check(
    sys_a: &TruncatedSystem,
    sys_b: &TruncatedSystem,
    perturbation_a: &CMatrix,
    lambdas: &[f64],
) -> Result<MarginalOutcome> {
    require_couplings(lambdas)?;
    let (da, db) = (sys_a.dim(), sys_b.dim());
    da.checked_mul(db)
        .filter(|&d| d <= MAX_JOINT_DIM)
        .ok_or_else(|| {
            Error::DimensionTooLarge(format!(
                "joint dimension {da}x{db} exceeds the cap of {MAX_JOINT_DIM}"
            ))
        })?;

    let id_a = CMatrix::identity(da, da);
    let id_b = CMatrix::identity(db, db);
    let h_joint = sys_a.hamiltonian().kronecker(&id_b) + id_a.kronecker(sys_b.hamiltonian());
    let rho_joint = sys_a.state().kronecker(sys_b.state());
    let obs_joint = sys_a.observable().kronecker(&id_b);
    let v_joint = perturbation_a.kronecker(&id_b);

    let mut max_discrepancy = 0.0_f64;
    for &lambda in lambdas {
        let bare = Propagator::new(sys_a, perturbation_a, lambda)?;
        let lifted =
            Propagator::from_matrices(&h_joint, &rho_joint, &obs_joint, &v_joint, lambda)?;
        let horizon = HORIZON_FACTOR / lambda;
        for t in time_grid(horizon) {
            let discrepancy = (bare.expectation(t) - lifted.expectation(t)).abs();
            if discrepancy > MARGINAL_TOL {
                return Ok(MarginalOutcome::Failed {
                    lambda,
                    time: t,
                    discrepancy,
                });
            }
            if discrepancy > max_discrepancy {
                max_discrepancy = discrepancy;
            }
        }
        bare.check_residual()?;
        lifted.check_residual()?;
    }
    Ok(MarginalOutcome::Verified { max_discrepancy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::C64;
    use nalgebra::DVector;

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

    fn two_level_system() -> TruncatedSystem {
        TruncatedSystem::new(diag(&[0.0, 1.0]), diag(&[1.0, 0.0]), diag(&[1.0, 0.0]))
            .expect("two-level system is valid")
    }

    fn thermal_system(energies: &[f64], beta: f64) -> TruncatedSystem {
        let weights: Vec<f64> = energies.iter().map(|e| (-beta * e).exp()).collect();
        let z: f64 = weights.iter().sum();
        let pops: Vec<f64> = weights.iter().map(|w| w / z).collect();
        let mut obs = vec![0.0; energies.len()];
        obs[0] = 1.0;
        TruncatedSystem::new(diag(energies), diag(&pops), diag(&obs))
            .expect("thermal system is valid")
    }

    #[test]
    fn spectator_factor_leaves_marginal_untouched() {
        let sys_a = two_level_system();
        let sys_b = thermal_system(&[0.0, 0.7], 1.0);
        let outcome = marginal_stability_check(&sys_a, &sys_b, &pauli_x(), &[0.3, 0.15])
            .expect("2x2 joint check runs");
        match outcome {
            MarginalOutcome::Verified { max_discrepancy } => assert!(
                max_discrepancy <= MARGINAL_TOL,
                "joint and bare dynamics should agree, worst gap {max_discrepancy:.3e}"
            ),
            MarginalOutcome::Failed {
                lambda,
                time,
                discrepancy,
            } => panic!(
                "spectator factor changed the marginal at lambda={lambda}, t={time}: {discrepancy:.3e}"
            ),
        }
    }

    #[test]
    fn mixed_dimensions_verify_as_well() {
        let sys_a = thermal_system(&[0.0, 1.0, 2.5], 0.8);
        let mut v = CMatrix::zeros(3, 3);
        v[(0, 1)] = C64::new(0.6, 0.2);
        v[(1, 0)] = C64::new(0.6, -0.2);
        v[(1, 2)] = C64::new(0.0, -0.5);
        v[(2, 1)] = C64::new(0.0, 0.5);
        let sys_b = thermal_system(&[0.0, 0.3], 2.0);
        let outcome = marginal_stability_check(&sys_a, &sys_b, &v, &[0.2])
            .expect("3x2 joint check runs");
        assert!(
            matches!(outcome, MarginalOutcome::Verified { .. }),
            "expected agreement, got {outcome:?}"
        );
    }

    #[test]
    fn rejects_oversized_joint_dimension() {
        let n = 70;
        let h = CMatrix::zeros(n, n);
        let rho = CMatrix::identity(n, n) * C64::new(1.0 / n as f64, 0.0);
        let obs = CMatrix::identity(n, n);
        let sys = TruncatedSystem::new(h.clone(), rho, obs).expect("70-level system is valid");
        let err = marginal_stability_check(&sys, &sys, &h, &[0.1])
            .expect_err("70x70 joint space must be rejected");
        assert!(
            matches!(err, Error::DimensionTooLarge(_)),
            "expected the joint cap, got: {err}"
        );
    }
}
