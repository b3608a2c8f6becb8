//! Diagonal states in log-population form, β-profiles, and thermal-form checks.
//!
//! States are unnormalized: only population ratios carry structural meaning,
//! so everything is stored additively in log space. Zero populations use a
//! negative-infinity sentinel and surface as infinite inverse temperature.

use serde::{Deserialize, Serialize};

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::rat::{format_rat, rat_to_f64, Rat};
use crate::spectrum::Spectrum;
use crate::DEFAULT_TOL;

/// A log-population: exact finite value, or zero population.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LogValue {
    Finite(Exact),
    NegInfinity,
}

impl LogValue {
    pub fn rational(r: Rat) -> LogValue {
        LogValue::Finite(Exact::rational(r))
    }

    pub fn integer(n: i64) -> LogValue {
        LogValue::Finite(Exact::integer(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, LogValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&Exact> {
        match self {
            LogValue::Finite(v) => Some(v),
            LogValue::NegInfinity => None,
        }
    }

    /// Numeric value; negative infinity for zero populations.
    pub fn eval(&self, basis: &Basis) -> f64 {
        match self {
            LogValue::Finite(v) => v.eval(basis),
            LogValue::NegInfinity => f64::NEG_INFINITY,
        }
    }

    /// Sum of two log values; zero population absorbs.
    pub fn add(&self, other: &LogValue) -> LogValue {
        match (self, other) {
            (LogValue::Finite(a), LogValue::Finite(b)) => LogValue::Finite(a + b),
            _ => LogValue::NegInfinity,
        }
    }
}

impl std::fmt::Display for LogValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LogValue::Finite(v) => write!(f, "{v}"),
            LogValue::NegInfinity => write!(f, "-inf"),
        }
    }
}

/// Log-populations for a spectrum, one entry per level (degenerate slots at
/// a level share the entry).
#[derive(Debug, Clone, PartialEq)]
pub struct LogState {
    entries: Vec<LogValue>,
}

impl LogState {
    pub fn new(entries: Vec<LogValue>) -> LogState {
        LogState { entries }
    }

    /// Convenience constructor: finite rational entries with `None` for zero
    /// populations.
    pub fn from_rationals(entries: Vec<Option<Rat>>) -> LogState {
        LogState {
            entries: entries
                .into_iter()
                .map(|e| match e {
                    Some(r) => LogValue::rational(r),
                    None => LogValue::NegInfinity,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LogValue] {
        &self.entries
    }

    pub fn value(&self, n: usize) -> &LogValue {
        &self.entries[n]
    }

    /// Indices of levels with nonzero population.
    pub fn support(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn support_is_ground_only(&self) -> bool {
        self.entries.first().is_some_and(LogValue::is_finite)
            && self.entries.iter().skip(1).all(|v| !v.is_finite())
    }

    /// The same state with a common rational constant added to every finite
    /// entry. All verdicts in this module are invariant under this.
    pub fn renormalized(&self, c: &Rat) -> LogState {
        let shift = Exact::rational(c.clone());
        LogState {
            entries: self
                .entries
                .iter()
                .map(|v| match v {
                    LogValue::Finite(x) => LogValue::Finite(x + &shift),
                    LogValue::NegInfinity => LogValue::NegInfinity,
                })
                .collect(),
        }
    }

    /// Numerically normalized populations, one value per level: each
    /// eigenvector slot at level n carries `p_n`, and
    /// `sum_n mult_n * p_n = 1` up to floating error.
    pub fn normalized_populations(&self, spec: &Spectrum) -> Result<Vec<f64>> {
        check_alignment(self, spec)?;
        let basis = spec.basis();
        let raw: Vec<f64> = self.entries.iter().map(|v| v.eval(basis).exp()).collect();
        let z: f64 = raw
            .iter()
            .zip(spec.levels())
            .map(|(p, l)| p * f64::from(l.mult))
            .sum();
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::invalid(
                "state has no normalizable population mass",
            ));
        }
        Ok(raw.into_iter().map(|p| p / z).collect())
    }
}

/// An inverse temperature: finite positive rational, or infinite
/// (zero temperature).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Beta {
    Finite(Rat),
    Infinite,
}

impl std::fmt::Display for Beta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Beta::Finite(r) => write!(f, "{}", format_rat(r)),
            Beta::Infinite => write!(f, "inf"),
        }
    }
}

/// One β-profile entry: exact when the log-population gap is an exact
/// rational multiple of the energy gap, numeric otherwise, infinite for
/// zero populations.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaEntry {
    Exact(Rat),
    Approx(f64),
    Infinite,
}

impl BetaEntry {
    pub fn exact(&self) -> Option<&Rat> {
        match self {
            BetaEntry::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            BetaEntry::Exact(r) => rat_to_f64(r),
            BetaEntry::Approx(x) => *x,
            BetaEntry::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, BetaEntry::Infinite)
    }

    /// Equality of inverse temperatures: exact when both sides are exact,
    /// relative-tolerance numeric comparison otherwise.
    pub fn agrees_with(&self, other: &BetaEntry, tol: f64) -> bool {
        match (self, other) {
            (BetaEntry::Exact(a), BetaEntry::Exact(b)) => a == b,
            (BetaEntry::Infinite, BetaEntry::Infinite) => true,
            (BetaEntry::Infinite, _) | (_, BetaEntry::Infinite) => false,
            (a, b) => {
                let (x, y) = (a.as_f64(), b.as_f64());
                (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
            }
        }
    }
}

impl std::fmt::Display for BetaEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BetaEntry::Exact(r) => write!(f, "{}", format_rat(r)),
            BetaEntry::Approx(x) => write!(f, "~{x}"),
            BetaEntry::Infinite => write!(f, "inf"),
        }
    }
}

/// Per-level inverse temperatures relative to the ground level:
/// `entry(n)` is defined for levels n ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaProfile {
    entries: Vec<BetaEntry>,
}

impl BetaProfile {
    pub fn entries(&self) -> &[BetaEntry] {
        &self.entries
    }

    /// β for level n (n ≥ 1).
    pub fn beta(&self, n: usize) -> &BetaEntry {
        assert!(n >= 1, "beta profile starts at level 1");
        &self.entries[n - 1]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Verdict of the population-monotonicity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Passivity {
    Passive,
    /// Populations fail to decrease between the named adjacent levels
    /// (lower index first).
    Violation(usize, usize),
}

/// Verdict of the thermal-form check.
#[derive(Debug, Clone, PartialEq)]
pub enum GibbsCheck {
    Gibbs(BetaEntry),
    NotGibbs { witness: (usize, usize) },
}

/// Partition sum over the truncated level list. No tail bound is asserted:
/// the value covers the listed levels only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionValue {
    pub value: f64,
    pub tail_bounded: bool,
}

fn check_alignment(state: &LogState, spec: &Spectrum) -> Result<()> {
    if state.len() != spec.len() {
        return Err(Error::invalid(format!(
            "state has {} entries but spectrum has {} levels",
            state.len(),
            spec.len()
        )));
    }
    Ok(())
}

/// The thermal state at inverse temperature β, ground-referenced:
/// `logp(n) = -β (E_n - E_0)`, and at β = ∞ the ground level alone is
/// populated.
pub fn gibbs_state(spec: &Spectrum, beta: &Beta) -> Result<LogState> {
    let entries = match beta {
        Beta::Finite(b) => {
            if *b <= Rat::from_integer(0.into()) {
                return Err(Error::invalid("inverse temperature must be positive"));
            }
            let neg_b = -b.clone();
            (0..spec.len())
                .map(|n| LogValue::Finite(spec.gap(n).scale(&neg_b)))
                .collect()
        }
        Beta::Infinite => (0..spec.len())
            .map(|n| {
                if n == 0 {
                    LogValue::integer(0)
                } else {
                    LogValue::NegInfinity
                }
            })
            .collect(),
    };
    Ok(LogState::new(entries))
}

/// Per-level inverse temperatures: `β_n = -(logp(n) - logp(0)) / (E_n - E_0)`
/// for n ≥ 1, infinite where the population vanishes.
///
/// The entry is exact whenever the log-population drop is an exact rational
/// multiple of the energy gap — which includes every state produced by
/// [`gibbs_state`], even on irrational spectra — and numeric otherwise.
pub fn beta_profile(state: &LogState, spec: &Spectrum) -> Result<BetaProfile> {
    check_alignment(state, spec)?;
    let log0 = state.value(0).finite().ok_or_else(|| {
        Error::invalid("ground-level population is zero; β-profile undefined")
    })?;
    let mut entries = Vec::with_capacity(spec.len().saturating_sub(1));
    for n in 1..spec.len() {
        let entry = match state.value(n) {
            LogValue::NegInfinity => BetaEntry::Infinite,
            LogValue::Finite(logn) => {
                let drop = log0 - logn;
                let gap = spec.gap(n);
                match drop.ratio_to(&gap) {
                    Some(r) => BetaEntry::Exact(r),
                    None => {
                        let basis = spec.basis();
                        BetaEntry::Approx(drop.eval(basis) / gap.eval(basis))
                    }
                }
            }
        };
        entries.push(entry);
    }
    Ok(BetaProfile { entries })
}

/// Checks that populations are non-increasing in energy, strictly decreasing
/// on the support, and that zero populations sit above all nonzero ones.
/// Returns the first offending adjacent level pair otherwise.
pub fn check_passivity(state: &LogState, spec: &Spectrum) -> Result<Passivity> {
    check_alignment(state, spec)?;
    let basis = spec.basis();
    for n in 0..state.len().saturating_sub(1) {
        let ok = match (state.value(n), state.value(n + 1)) {
            (LogValue::Finite(lo), LogValue::Finite(hi)) => {
                hi.cmp_by(lo, basis) == std::cmp::Ordering::Less
            }
            (LogValue::Finite(_), LogValue::NegInfinity) => true,
            (LogValue::NegInfinity, LogValue::NegInfinity) => true,
            (LogValue::NegInfinity, LogValue::Finite(_)) => false,
        };
        if !ok {
            return Ok(Passivity::Violation(n, n + 1));
        }
    }
    Ok(Passivity::Passive)
}

/// Decides whether the state is thermal: passivity, a constant β-profile,
/// and a consistent zero-temperature branch (infinite entries only when the
/// support is exactly the ground level).
pub fn is_gibbs(state: &LogState, spec: &Spectrum) -> Result<GibbsCheck> {
    is_gibbs_with_tol(state, spec, DEFAULT_TOL)
}

/// [`is_gibbs`] with an explicit tolerance for comparing numeric β entries.
pub fn is_gibbs_with_tol(state: &LogState, spec: &Spectrum, tol: f64) -> Result<GibbsCheck> {
    check_alignment(state, spec)?;
    if let Passivity::Violation(n, m) = check_passivity(state, spec)? {
        return Ok(GibbsCheck::NotGibbs { witness: (n, m) });
    }
    if state.value(0).finite().is_none() {
        // Passivity admits no finite entry above a zero one, so the whole
        // state is zero: not a state at all.
        return Err(Error::invalid(
            "ground-level population is zero; thermal form undefined",
        ));
    }
    let profile = beta_profile(state, spec)?;
    for n in 1..spec.len().saturating_sub(1) {
        if !profile.beta(n).agrees_with(profile.beta(n + 1), tol) {
            return Ok(GibbsCheck::NotGibbs { witness: (n, n + 1) });
        }
    }
    match profile.entries().first() {
        None => Ok(GibbsCheck::Gibbs(BetaEntry::Infinite)),
        Some(first) => {
            // All entries agree; prefer an exact representative if any.
            let rep = profile
                .entries()
                .iter()
                .find(|e| e.exact().is_some())
                .unwrap_or(first);
            Ok(GibbsCheck::Gibbs(rep.clone()))
        }
    }
}

/// Whether multiplicity-resolved populations define a function of the
/// energy: equal (within `tol`, relative) across every degenerate level.
pub fn is_function_of_hamiltonian(
    populations: &[f64],
    spec: &Spectrum,
    tol: f64,
) -> Result<bool> {
    if populations.len() != spec.slot_count() {
        return Err(Error::invalid(format!(
            "{} populations supplied for {} eigenvector slots",
            populations.len(),
            spec.slot_count()
        )));
    }
    let mut slot = 0;
    for level in spec.levels() {
        let group = &populations[slot..slot + level.mult as usize];
        slot += level.mult as usize;
        let first = group[0];
        for &p in &group[1..] {
            if (p - first).abs() > tol * first.abs().max(p.abs()).max(1.0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Partition sum `Σ mult · exp(-β E)` over the listed levels. The flag
/// records that no tail estimate beyond the truncation is claimed.
pub fn partition_function(spec: &Spectrum, beta: f64) -> Result<PartitionValue> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid("inverse temperature must be positive and finite"));
    }
    let basis = spec.basis();
    let value = spec
        .levels()
        .iter()
        .map(|l| f64::from(l.mult) * (-beta * l.energy.eval(basis)).exp())
        .sum();
    Ok(PartitionValue {
        value,
        tail_bounded: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn int_spectrum(energies: &[i64]) -> Spectrum {
        Spectrum::new(
            Basis::rational(),
            energies.iter().map(|&e| (Exact::integer(e), 1)).collect(),
        )
        .unwrap()
    }

    fn int_state(entries: &[Option<i64>]) -> LogState {
        LogState::from_rationals(
            entries
                .iter()
                .map(|e| e.map(|v| Rat::from_integer(v.into())))
                .collect(),
        )
    }

    #[test]
    fn gibbs_state_unit_beta_matches_negated_gaps() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = gibbs_state(&spec, &Beta::Finite(rat(1, 1))).unwrap();
        assert_eq!(state, int_state(&[Some(0), Some(-1), Some(-2)]));
    }

    #[test]
    fn gibbs_state_zero_temperature_populates_ground_only() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = gibbs_state(&spec, &Beta::Infinite).unwrap();
        assert_eq!(state, int_state(&[Some(0), None, None]));
        assert!(state.support_is_ground_only());
    }

    #[test]
    fn gibbs_state_on_irrational_spectrum_scales_coordinates() {
        let basis = Basis::with_generator("sqrt2", std::f64::consts::SQRT_2).unwrap();
        let three_minus = Exact::from_coords(vec![rat(3, 1), rat(-1, 1)]);
        let one_plus = Exact::from_coords(vec![rat(1, 1), rat(1, 1)]);
        let spec = Spectrum::new(
            basis.clone(),
            vec![
                (Exact::zero(), 1),
                (three_minus.clone(), 1),
                (one_plus.clone(), 1),
            ],
        )
        .unwrap();
        let state = gibbs_state(&spec, &Beta::Finite(rat(1, 1))).unwrap();
        let expect_1 = three_minus.scale(&rat(-1, 1));
        assert_eq!(state.value(1), &LogValue::Finite(expect_1));
        let numeric = state.value(2).eval(&basis);
        assert!(
            (numeric + (1.0 + std::f64::consts::SQRT_2)).abs() < 1e-12,
            "log-population of the top level should evaluate to -(1+sqrt2)"
        );
    }

    #[test]
    fn beta_profile_reads_off_distinct_temperatures() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), Some(-1), Some(-4)]);
        let profile = beta_profile(&state, &spec).unwrap();
        assert_eq!(profile.beta(1), &BetaEntry::Exact(rat(1, 1)));
        assert_eq!(profile.beta(2), &BetaEntry::Exact(rat(2, 1)));
    }

    #[test]
    fn beta_profile_zero_population_reads_infinite() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), None, None]);
        let profile = beta_profile(&state, &spec).unwrap();
        assert!(profile.beta(1).is_infinite());
        assert!(profile.beta(2).is_infinite());
    }

    #[test]
    fn beta_profile_is_exact_on_parallel_irrational_data() {
        let basis = Basis::with_generator("sqrt2", std::f64::consts::SQRT_2).unwrap();
        let root2 = Exact::from_coords(vec![rat(0, 1), rat(1, 1)]);
        let spec = Spectrum::new(
            basis,
            vec![
                (Exact::zero(), 1),
                (root2.clone(), 1),
                (root2.scale(&rat(2, 1)), 1),
            ],
        )
        .unwrap();
        let state = LogState::new(vec![
            LogValue::integer(0),
            LogValue::Finite(root2.scale(&rat(-1, 1))),
            LogValue::Finite(root2.scale(&rat(-3, 1))),
        ]);
        let profile = beta_profile(&state, &spec).unwrap();
        assert_eq!(profile.beta(1), &BetaEntry::Exact(rat(1, 1)));
        assert_eq!(profile.beta(2), &BetaEntry::Exact(rat(3, 2)));
    }

    #[test]
    fn beta_profile_requires_populated_ground_level() {
        let spec = int_spectrum(&[0, 1]);
        let state = int_state(&[None, Some(0)]);
        assert!(beta_profile(&state, &spec).is_err());
    }

    #[test]
    fn passivity_accepts_decreasing_populations() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), Some(-1), Some(-4)]);
        assert_eq!(check_passivity(&state, &spec).unwrap(), Passivity::Passive);
    }

    #[test]
    fn passivity_rejects_population_increase() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), Some(-2), Some(-1)]);
        assert_eq!(
            check_passivity(&state, &spec).unwrap(),
            Passivity::Violation(1, 2)
        );
    }

    #[test]
    fn passivity_rejects_support_gaps() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), None, Some(-1)]);
        assert_eq!(
            check_passivity(&state, &spec).unwrap(),
            Passivity::Violation(1, 2)
        );
    }

    #[test]
    fn passivity_rejects_equal_populations_on_support() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), Some(0), Some(-1)]);
        assert_eq!(
            check_passivity(&state, &spec).unwrap(),
            Passivity::Violation(0, 1)
        );
    }

    #[test]
    fn is_gibbs_accepts_thermal_state() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), Some(-1), Some(-2)]);
        assert_eq!(
            is_gibbs(&state, &spec).unwrap(),
            GibbsCheck::Gibbs(BetaEntry::Exact(rat(1, 1)))
        );
    }

    #[test]
    fn is_gibbs_flags_temperature_mismatch() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), Some(-1), Some(-4)]);
        assert_eq!(
            is_gibbs(&state, &spec).unwrap(),
            GibbsCheck::NotGibbs { witness: (1, 2) }
        );
    }

    #[test]
    fn is_gibbs_accepts_zero_temperature_state() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), None, None]);
        assert_eq!(
            is_gibbs(&state, &spec).unwrap(),
            GibbsCheck::Gibbs(BetaEntry::Infinite)
        );
    }

    #[test]
    fn is_gibbs_rejects_partial_support() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), Some(-1), None]);
        assert_eq!(
            is_gibbs(&state, &spec).unwrap(),
            GibbsCheck::NotGibbs { witness: (1, 2) }
        );
    }

    #[test]
    fn gibbs_round_trip_recovers_beta_exactly() {
        let spec = int_spectrum(&[0, 2, 5, 9]);
        for beta in [rat(1, 3), rat(2, 1), rat(7, 4)] {
            let state = gibbs_state(&spec, &Beta::Finite(beta.clone())).unwrap();
            assert_eq!(
                is_gibbs(&state, &spec).unwrap(),
                GibbsCheck::Gibbs(BetaEntry::Exact(beta))
            );
        }
    }

    #[test]
    fn verdicts_survive_renormalization_and_energy_shift() {
        let spec = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), Some(-1), Some(-4)]);
        let shifted_spec = spec.shifted(&rat(7, 3));
        let shifted_state = state.renormalized(&rat(-5, 2));
        assert_eq!(
            beta_profile(&state, &spec).unwrap(),
            beta_profile(&shifted_state, &shifted_spec).unwrap()
        );
        assert_eq!(
            is_gibbs(&state, &spec).unwrap(),
            is_gibbs(&shifted_state, &shifted_spec).unwrap()
        );
        assert_eq!(
            check_passivity(&state, &spec).unwrap(),
            check_passivity(&shifted_state, &shifted_spec).unwrap()
        );
    }

    #[test]
    fn function_of_hamiltonian_requires_equal_degenerate_populations() {
        let basis = Basis::rational();
        let spec = Spectrum::new(
            basis,
            vec![(Exact::integer(0), 1), (Exact::integer(1), 2)],
        )
        .unwrap();
        assert!(is_function_of_hamiltonian(&[0.4, 0.3, 0.3], &spec, 1e-9).unwrap());
        assert!(!is_function_of_hamiltonian(&[0.5, 0.3, 0.2], &spec, 1e-9).unwrap());
        assert!(is_function_of_hamiltonian(&[0.5, 0.3], &int_spectrum(&[0, 1]), 1e-9).unwrap());
        assert!(is_function_of_hamiltonian(&[0.1], &spec, 1e-9).is_err());
    }

    #[test]
    fn partition_function_sums_listed_levels() {
        let spec = int_spectrum(&[0, 1, 2]);
        let z = partition_function(&spec, std::f64::consts::LN_2).unwrap();
        assert!((z.value - 1.75).abs() < 1e-12);
        assert!(!z.tail_bounded);

        let single = int_spectrum(&[0]);
        let z1 = partition_function(&single, 5.0).unwrap();
        assert!((z1.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalized_populations_sum_to_one_with_multiplicity() {
        let basis = Basis::rational();
        let spec = Spectrum::new(
            basis,
            vec![(Exact::integer(0), 1), (Exact::integer(1), 3)],
        )
        .unwrap();
        let state = int_state(&[Some(0), Some(-1)]);
        let pops = state.normalized_populations(&spec).unwrap();
        let total = pops[0] + 3.0 * pops[1];
        assert!((total - 1.0).abs() < 1e-12);
        assert!((pops[1] / pops[0] - (-1.0f64).exp()).abs() < 1e-12);
    }
}
