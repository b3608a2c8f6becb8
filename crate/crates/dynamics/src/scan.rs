//! Weak-coupling stability scans: how far an observable's expectation moves
//! from its unperturbed value, as the coupling is dialed down.
//!
//! For each coupling `lambda` the scan evolves the system over a horizon of
//! `8/lambda` (several periods of the slowest perturbation-induced
//! rotation), measures the supremum of `|Tr[O rho(t)] - Tr[O rho]|` on a
//! dense grid, and sharpens the grid maximum with a golden-section pass so
//! the reported supremum is accurate to far better than the verdict
//! tolerances. A sequence of shrinking couplings then classifies the state:
//! deviations that shrink at least proportionally with `lambda` and end
//! below `1e-3` decay to zero; deviations that stay pinned above `0.1`
//! persist; anything else is inconclusive.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::evolve::Propagator;
use crate::system::{commutator_residual, CMatrix, TruncatedSystem};

/// Number of grid points per coupling strength.
pub const GRID_POINTS: usize = 2048;

/// Evolution horizon in units of the inverse coupling: `8/lambda`.
pub const HORIZON_FACTOR: f64 = 8.0;

/// Largest commutator residual `||[H, rho]||` accepted as stationary.
pub const STATIONARITY_TOL: f64 = 1e-10;

/// A decaying scan must end below this deviation.
pub const DECAY_FINAL_BOUND: f64 = 1e-3;

/// A persistent scan must stay above this deviation for every coupling.
pub const PERSISTENCE_FLOOR: f64 = 0.1;

/// Deviations entirely below this level count as an exact fixed point.
pub const NEGLIGIBLE_DEVIATION: f64 = 1e-12;

/// A persistent plateau may spread by at most this factor between its
/// smallest and largest deviation.
const PLATEAU_FACTOR: f64 = 2.0;

/// Golden-section refinement stops once the bracket is this fraction of a
/// grid step; the supremum error is then quadratically smaller still.
const REFINE_FRACTION: f64 = 1e-6;

/// Classification of a deviation sequence across shrinking couplings.
#[derive(Debug, Clone, PartialEq)]
pub enum ScanVerdict {
    /// Deviations shrink at least proportionally to the coupling and end
    /// below [`DECAY_FINAL_BOUND`]. `rate` is the fitted power-law exponent
    /// of deviation against coupling (`None` when every deviation is below
    /// [`NEGLIGIBLE_DEVIATION`], where no exponent is measurable).
    DecaysToZero { rate: Option<f64> },
    /// Deviations stay above [`PERSISTENCE_FLOOR`] for every coupling,
    /// within a factor [`PLATEAU_FACTOR`] plateau. `floor` is the smallest
    /// deviation seen.
    Persistent { floor: f64 },
    /// Neither pattern: the couplings scanned do not separate the two.
    Inconclusive,
}

/// Result of a stability scan: one supremum deviation per coupling, the
/// horizons used, and the classification.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityScan {
    /// Couplings scanned, strictly decreasing.
    pub lambdas: Vec<f64>,
    /// Supremum of `|Tr[O rho(t)] - Tr[O rho]|` per coupling.
    pub deviations: Vec<f64>,
    /// Horizon `8/lambda` per coupling.
    pub time_horizons: Vec<f64>,
    /// Classification of the deviation sequence.
    pub verdict: ScanVerdict,
}

pub(crate) fn require_couplings(lambdas: &[f64]) -> Result<()> {
    if lambdas.is_empty() {
        return Err(Error::invalid("at least one coupling strength is required"));
    }
    for (i, &l) in lambdas.iter().enumerate() {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::invalid(format!(
                "couplings[{i}] = {l} must be finite and positive"
            )));
        }
        if i > 0 && l >= lambdas[i - 1] {
            return Err(Error::invalid(format!(
                "couplings must be strictly decreasing, but couplings[{i}] = {l} follows {}",
                lambdas[i - 1]
            )));
        }
    }
    Ok(())
}

/// Evenly spaced grid on `[0, horizon]` with [`GRID_POINTS`] points.
pub(crate) fn time_grid(horizon: f64) -> impl Iterator<Item = f64> {
    let step = horizon / (GRID_POINTS - 1) as f64;
    (0..GRID_POINTS).map(move |i| step * i as f64)
}

/// Maximizes `f` on `[a, b]` by golden-section search, assuming the bracket
/// came from a grid argmax so `f` is close to unimodal on it. Returns the
/// best value seen; the caller keeps the max with the grid value, so a
/// non-unimodal corner case can only under-refine, never lose the grid sup.
fn golden_max(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// Supremum of `|expectation(t) - baseline|` over `[0, horizon]`: dense
/// grid plus golden-section refinement around the grid argmax.
pub(crate) fn sup_deviation(prop: &Propagator, baseline: f64, horizon: f64) -> f64 {
    let step = horizon / (GRID_POINTS - 1) as f64;
    let mut best = 0.0_f64;
    let mut best_i = 0usize;
    for (i, t) in time_grid(horizon).enumerate() {
        let d = (prop.expectation(t) - baseline).abs();
        if d > best {
            best = d;
            best_i = i;
        }
    }
    let lo = (best_i.saturating_sub(1)) as f64 * step;
    let hi = ((best_i + 1).min(GRID_POINTS - 1)) as f64 * step;
    let refined = golden_max(
        &mut |t| (prop.expectation(t) - baseline).abs(),
        lo,
        hi,
        step * REFINE_FRACTION,
    );
    best.max(refined)
}

/// Least-squares slope of `ln(deviation)` against `ln(lambda)`: the
/// measured power-law exponent. `None` unless at least two couplings have
/// a strictly positive deviation.
fn fitted_rate(lambdas: &[f64], deviations: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = lambdas
        .iter()
        .zip(deviations)
        .filter(|(_, &d)| d > 0.0)
        .map(|(&l, &d)| (l.ln(), d.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn classify(lambdas: &[f64], deviations: &[f64]) -> ScanVerdict {
    if deviations.iter().all(|&d| d <= NEGLIGIBLE_DEVIATION) {
        return ScanVerdict::DecaysToZero { rate: None };
    }
    let final_dev = *deviations.last().expect("couplings are non-empty");
    let proportional = deviations.windows(2).zip(lambdas.windows(2)).all(|(d, l)| {
        // d[1] / d[0] <= l[1] / l[0], cross-multiplied to tolerate d[0] = 0.
        d[1] * l[0] <= d[0] * l[1] * (1.0 + 1e-9) + NEGLIGIBLE_DEVIATION
    });
    if final_dev < DECAY_FINAL_BOUND && proportional {
        return ScanVerdict::DecaysToZero {
            rate: fitted_rate(lambdas, deviations),
        };
    }
    let floor = deviations.iter().copied().fold(f64::INFINITY, f64::min);
    let peak = deviations.iter().copied().fold(0.0_f64, f64::max);
    if floor >= PERSISTENCE_FLOOR && peak <= floor * PLATEAU_FACTOR {
        return ScanVerdict::Persistent { floor };
    }
    ScanVerdict::Inconclusive
}

/// Scans a stationary state's response to `lambda * V` across a strictly
/// decreasing sequence of couplings.
///
/// Requires `[H, rho]` to vanish within [`STATIONARITY_TOL`] — the scan
/// measures what the *perturbation* does, so the unperturbed state must not
/// move on its own.
pub fn first_order_stability_scan(
    sys: &TruncatedSystem,
    perturbation: &CMatrix,
    lambdas: &[f64],
) -> Result<StabilityScan> {
    require_couplings(lambdas)?;
    let stationarity = commutator_residual(sys.hamiltonian(), sys.state());
    if stationarity >= STATIONARITY_TOL {
        return Err(Error::invalid(format!(
            "state is not stationary: commutator residual {stationarity:.3e} exceeds {STATIONARITY_TOL:.0e}"
        )));
    }
    let baseline = sys.baseline_expectation();
    let mut deviations = Vec::with_capacity(lambdas.len());
    let mut time_horizons = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let prop = Propagator::new(sys, perturbation, lambda)?;
        let horizon = HORIZON_FACTOR / lambda;
        deviations.push(sup_deviation(&prop, baseline, horizon));
        time_horizons.push(horizon);
        prop.check_residual()?;
    }
    let verdict = classify(lambdas, &deviations);
    Ok(StabilityScan {
        lambdas: lambdas.to_vec(),
        deviations,
        time_horizons,
        verdict,
    })
}

/// JSON report of a scan: couplings, deviations, horizons, and the verdict,
/// with deterministic key order.
pub fn scan_report_value(scan: &StabilityScan) -> Value {
    let verdict = match &scan.verdict {
        ScanVerdict::DecaysToZero { rate } => json!({
            "verdict": "decays_to_zero",
            "rate": rate,
        }),
        ScanVerdict::Persistent { floor } => json!({
            "verdict": "persistent",
            "floor": floor,
        }),
        ScanVerdict::Inconclusive => json!({ "verdict": "inconclusive" }),
    };
    json!({
        "type": "stability_scan",
        "lambdas": scan.lambdas,
        "deviations": scan.deviations,
        "time_horizons": scan.time_horizons,
        "verdict": verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::C64;
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

    /// Hermitian matrix with unit operator norm, seeded.
    fn random_perturbation(dim: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
            for j in (i + 1)..dim {
                let e = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = e;
                m[(j, i)] = e.conj();
            }
        }
        let norm = nalgebra::linalg::SymmetricEigen::new(m.clone())
            .eigenvalues
            .iter()
            .fold(0.0_f64, |w, &x| w.max(x.abs()));
        m / C64::new(norm, 0.0)
    }

    #[test]
    fn degenerate_pair_swings_fully_and_persists() {
        let sys = TruncatedSystem::new(CMatrix::zeros(2, 2), diag(&[1.0, 0.0]), diag(&[1.0, 0.0]))
            .expect("degenerate two-level system is valid");
        let lambdas = [0.2, 0.1, 0.05, 0.025];
        let scan = first_order_stability_scan(&sys, &pauli_x(), &lambdas)
            .expect("degenerate scan succeeds");
        for (dev, lambda) in scan.deviations.iter().zip(lambdas) {
            assert!(
                (dev - 1.0).abs() <= 1e-9,
                "full population swing expected at lambda={lambda}, got deviation {dev}"
            );
        }
        match scan.verdict {
            ScanVerdict::Persistent { floor } => assert!(
                (floor - 1.0).abs() <= 1e-9,
                "persistence floor should be the full swing, got {floor}"
            ),
            ref other => panic!("expected a persistent verdict, got {other:?}"),
        }
    }

    #[test]
    fn thermal_three_level_state_decays_quadratically() {
        let z = 1.0 + (-1.0_f64).exp() + (-2.0_f64).exp();
        let sys = TruncatedSystem::new(
            diag(&[0.0, 1.0, 2.0]),
            diag(&[1.0 / z, (-1.0_f64).exp() / z, (-2.0_f64).exp() / z]),
            diag(&[1.0, 0.0, 0.0]),
        )
        .expect("thermal three-level system is valid");
        let v = random_perturbation(3, 7);
        let lambdas = [0.2, 0.1, 0.05, 0.025];
        let scan =
            first_order_stability_scan(&sys, &v, &lambdas).expect("thermal scan succeeds");
        for w in scan.deviations.windows(2) {
            assert!(
                w[1] < w[0],
                "deviations should shrink with the coupling: {:?}",
                scan.deviations
            );
        }
        let final_dev = *scan.deviations.last().unwrap();
        assert!(
            final_dev < 1e-3,
            "final deviation should be below 1e-3, got {final_dev}"
        );
        match scan.verdict {
            ScanVerdict::DecaysToZero { rate: Some(rate) } => assert!(
                (rate - 2.0).abs() < 0.2,
                "perturbative response should fit a quadratic power law, got exponent {rate}"
            ),
            ref other => panic!("expected a decaying verdict with a fitted rate, got {other:?}"),
        }
    }

    #[test]
    fn exact_fixed_point_reports_decay_without_a_rate() {
        let sys = TruncatedSystem::new(
            diag(&[0.0, 1.0]),
            diag(&[0.5, 0.5]),
            diag(&[1.0, -1.0]),
        )
        .expect("maximally mixed system is valid");
        let scan = first_order_stability_scan(&sys, &pauli_x(), &[0.2, 0.1])
            .expect("mixed-state scan succeeds");
        assert_eq!(
            scan.verdict,
            ScanVerdict::DecaysToZero { rate: None },
            "a state that never moves has no measurable exponent"
        );
        assert!(
            scan.deviations.iter().all(|&d| d <= NEGLIGIBLE_DEVIATION),
            "deviations should be numerically zero: {:?}",
            scan.deviations
        );
    }

    #[test]
    fn rejects_non_stationary_state() {
        let mut rho = diag(&[0.5, 0.5]);
        rho[(0, 1)] = C64::new(0.5, 0.0);
        rho[(1, 0)] = C64::new(0.5, 0.0);
        let sys = TruncatedSystem::new(diag(&[0.0, 1.0]), rho, diag(&[1.0, 0.0]))
            .expect("coherent superposition is a valid density matrix");
        let err = first_order_stability_scan(&sys, &pauli_x(), &[0.1])
            .expect_err("a moving baseline must be rejected");
        assert!(
            err.to_string().contains("stationary"),
            "error should explain the stationarity failure: {err}"
        );
    }

    #[test]
    fn rejects_non_decreasing_couplings() {
        let sys = TruncatedSystem::new(diag(&[0.0, 1.0]), diag(&[1.0, 0.0]), diag(&[1.0, 0.0]))
            .expect("two-level system is valid");
        let err = first_order_stability_scan(&sys, &pauli_x(), &[0.1, 0.1])
            .expect_err("a repeated coupling must be rejected");
        assert!(
            err.to_string().contains("decreasing"),
            "error should mention the ordering: {err}"
        );
        let err = first_order_stability_scan(&sys, &pauli_x(), &[])
            .expect_err("an empty coupling list must be rejected");
        assert!(
            err.to_string().contains("at least one"),
            "error should mention the empty list: {err}"
        );
    }

    #[test]
    fn report_serialization_is_deterministic_and_tagged() {
        let scan = StabilityScan {
            lambdas: vec![0.2, 0.1],
            deviations: vec![0.5, 0.25],
            time_horizons: vec![40.0, 80.0],
            verdict: ScanVerdict::Inconclusive,
        };
        let a = scan_report_value(&scan).to_string();
        let b = scan_report_value(&scan).to_string();
        assert_eq!(a, b, "report text must be deterministic");
        assert!(
            a.starts_with("{\"deviations\":[0.5,0.25],"),
            "keys should be emitted in sorted order: {a}"
        );
        assert!(
            a.contains("\"type\":\"stability_scan\""),
            "report should carry its type tag: {a}"
        );
        let persistent = StabilityScan {
            verdict: ScanVerdict::Persistent { floor: 0.9 },
            ..scan
        };
        assert!(
            scan_report_value(&persistent)
                .to_string()
                .contains("\"verdict\":\"persistent\""),
            "verdict tag should be snake_case"
        );
    }
}
