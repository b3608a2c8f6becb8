//! Explicit stable-but-not-thermal configurations for environments with
//! fewer than three modes, and the commensurable-gap forcing argument.
//!
//! With one or two oscillator modes the ratio constraints on a three-level
//! system with irrational gap ratio are too sparse to force a thermal
//! state: this module constructs explicit environment population tables
//! that satisfy every constraint, decay exponentially in energy, and pair
//! with a system state that fails the thermal check. Conversely, when two
//! system gaps are commensurable, a single mode at their common divisor
//! frequency already forces the two inverse temperatures to agree — the
//! forcing path derives that exactly.

use std::collections::HashMap;

use num::ToPrimitive;

use crate::basis::Basis;
use crate::constraint::{
    build_ratio_graph, check_summability, solve_env_state, SolveOutcome, SummabilityVerdict,
};
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::oscillator::{multimode_spectrum, oscillator_spectrum, MultimodeSpectrum};
use crate::rat::{rat, rat_to_f64, rational_approx, Rat};
use crate::spectrum::Spectrum;
use crate::state::{
    check_passivity, is_gibbs, BetaEntry, GibbsCheck, LogState, LogValue, Passivity,
};

/// An integer point of the two-mode excitation lattice.
pub type IntVec2 = [i64; 2];

/// Default half-width of the box searched for lattice vectors.
pub const LATTICE_SEARCH_BOUND: i64 = 16;

/// Tolerance for rounding base populations to rationals.
pub const BASE_ROUNDING_TOL: f64 = 1e-12;

fn int_rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn dot(omega: (&Exact, &Exact), v: IntVec2) -> Exact {
    &omega.0.scale(&int_rat(v[0])) + &omega.1.scale(&int_rat(v[1]))
}

fn det2(x: IntVec2, y: IntVec2) -> i64 {
    x[0] * y[1] - x[1] * y[0]
}

/// Two independent integer vectors whose frequency dot products realize the
/// system gaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePair {
    pub x: IntVec2,
    pub y: IntVec2,
    pub det: i64,
}

/// The quotient of the integer plane by the sublattice spanned by `x`, `y`:
/// `|det|` cosets, each with a canonical representative.
#[derive(Debug, Clone)]
pub struct CosetDecomposition {
    x: IntVec2,
    y: IntVec2,
    det: i64,
    representatives: Vec<IntVec2>,
    rep_by_key: HashMap<(i64, i64), usize>,
}

impl CosetDecomposition {
    pub fn x(&self) -> IntVec2 {
        self.x
    }

    pub fn y(&self) -> IntVec2 {
        self.y
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    /// Canonical coset representatives: for each coset, the non-negative
    /// member that comes first when ordering by the second coordinate and
    /// then the first. Listed in that same scan order.
    pub fn representatives(&self) -> &[IntVec2] {
        &self.representatives
    }

    /// Invariant label of a point's coset: the adjugate image reduced
    /// modulo `|det|`. Two points share a coset exactly when their keys
    /// agree.
    fn key(&self, v: IntVec2) -> (i64, i64) {
        let d = self.det.abs();
        let k0 = self.y[1] * v[0] - self.y[0] * v[1];
        let k1 = self.x[0] * v[1] - self.x[1] * v[0];
        (k0.rem_euclid(d), k1.rem_euclid(d))
    }

    /// Decomposes `v = a + z1·x + z2·y` with `a` the canonical
    /// representative of `v`'s coset; returns the representative's index
    /// and the exact integer coefficients.
    pub fn membership(&self, v: IntVec2) -> (usize, i64, i64) {
        let rep_idx = *self
            .rep_by_key
            .get(&self.key(v))
            .expect("every coset has a scanned representative");
        let a = self.representatives[rep_idx];
        let dv = [v[0] - a[0], v[1] - a[1]];
        let z1_num = dv[0] * self.y[1] - dv[1] * self.y[0];
        let z2_num = self.x[0] * dv[1] - self.x[1] * dv[0];
        debug_assert!(
            z1_num % self.det == 0 && z2_num % self.det == 0,
            "points in one coset differ by a lattice vector"
        );
        (rep_idx, z1_num / self.det, z2_num / self.det)
    }
}

/// Splits the integer plane into the `|det|` cosets of the sublattice
/// spanned by `x` and `y`.
///
/// Every coset contains points of the non-negative quadrant; the canonical
/// representative is the first one found scanning the square `[0, |det|)²`
/// by the second coordinate, then the first. That square is guaranteed to
/// contain a member of every coset because `(|det|, 0)` and `(0, |det|)`
/// both lie in the sublattice.
pub fn coset_decomposition(x: IntVec2, y: IntVec2) -> Result<CosetDecomposition> {
    let det = det2(x, y);
    if det == 0 {
        return Err(Error::invalid(
            "lattice vectors are linearly dependent (determinant zero)",
        ));
    }
    let mut out = CosetDecomposition {
        x,
        y,
        det,
        representatives: Vec::new(),
        rep_by_key: HashMap::new(),
    };
    let d = det.abs();
    'scan: for v1 in 0..d {
        for v0 in 0..d {
            let v = [v0, v1];
            let key = out.key(v);
            if !out.rep_by_key.contains_key(&key) {
                out.rep_by_key.insert(key, out.representatives.len());
                out.representatives.push(v);
                if out.representatives.len() == d as usize {
                    break 'scan;
                }
            }
        }
    }
    if out.representatives.len() != d as usize {
        return Err(Error::internal(
            "coset scan must find |det| representatives inside [0, |det|)²",
        ));
    }
    Ok(out)
}

/// A matched ladder transition: `steps · ω` equals the system gap between
/// the pair of levels (higher, lower).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderMatch {
    pub pair: (usize, usize),
    pub steps: u64,
}

/// Which construction produced a counterexample certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum CounterexampleKind {
    SingleMode {
        omega: Exact,
        matched: Option<LadderMatch>,
    },
    TwoMode {
        omega: (Exact, Exact),
        lattice: LatticePair,
        representatives: Vec<IntVec2>,
        base_decay: Rat,
    },
}

/// A verified environment population table witnessing that the given
/// system state passes every ratio constraint of this environment.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleCertificate {
    pub kind: CounterexampleKind,
    /// Thermal check of the system state (typically a refusal — that is
    /// the point of the construction).
    pub system_gibbs: GibbsCheck,
    pub env_truncs: Vec<usize>,
    /// Constructed log-populations per flattened lattice point.
    pub env_logg: Vec<LogValue>,
    /// Verdict of the summability check on the solved constraints.
    pub summability: SummabilityVerdict,
    /// Witnessed exponential decay rate of the constructed table: every
    /// point lies below the line through the maximal entry with this slope.
    pub decay_rate: f64,
}

/// Slope of the steepest exponential bound anchored at the maximal entry:
/// `None` when some entry at higher energy fails to lie strictly below it.
fn decay_rate(logg: &[LogValue], energies: &[Exact], basis: &Basis) -> Option<f64> {
    let mut anchor: Option<(f64, f64)> = None;
    for (i, v) in logg.iter().enumerate() {
        let LogValue::Finite(value) = v else { continue };
        let lv = basis.eval(value);
        let ev = basis.eval(&energies[i]);
        let better = match anchor {
            None => true,
            Some((alog, aen)) => lv > alog || (lv == alog && ev < aen),
        };
        if better {
            anchor = Some((lv, ev));
        }
    }
    let (alog, aen) = anchor?;
    let mut min_slope = f64::INFINITY;
    for (i, v) in logg.iter().enumerate() {
        let LogValue::Finite(value) = v else { continue };
        let ev = basis.eval(&energies[i]);
        if ev <= aen {
            continue;
        }
        min_slope = min_slope.min((alog - basis.eval(value)) / (ev - aen));
    }
    (min_slope.is_finite() && min_slope > 0.0).then_some(min_slope)
}

struct EnvVerification {
    summability: SummabilityVerdict,
    decay_rate: f64,
}

/// Checks a constructed table against the full constraint machinery: the
/// table must satisfy every ratio edge exactly, the graph must solve, the
/// solution must stay summable, and the table must decay.
fn verify_env_table(
    sys_spec: &Spectrum,
    sys_state: &LogState,
    env: &MultimodeSpectrum,
    logg: &[LogValue],
) -> Result<EnvVerification> {
    let graph = build_ratio_graph(sys_spec, sys_state, env.energies())?;
    for edge in graph.edges() {
        let (LogValue::Finite(a), LogValue::Finite(b)) = (&logg[edge.from], &logg[edge.to])
        else {
            return Err(Error::internal(
                "constructed table leaves a constrained level unpopulated",
            ));
        };
        if b - a != edge.offset {
            return Err(Error::internal(
                "constructed table violates a ratio constraint it was built to satisfy",
            ));
        }
    }
    let SolveOutcome::Consistent(assignment) = solve_env_state(&graph) else {
        return Err(Error::ConstructionFailed(
            "ratio constraints are inconsistent at this truncation".to_string(),
        ));
    };
    let summability = check_summability(&assignment, env)?;
    if !matches!(summability, SummabilityVerdict::Normalizable { .. }) {
        return Err(Error::ConstructionFailed(
            "forced populations do not stay normalizable".to_string(),
        ));
    }
    let Some(decay_rate) = decay_rate(logg, env.energies(), env.basis()) else {
        return Err(Error::ConstructionFailed(
            "constructed populations do not decay exponentially in energy".to_string(),
        ));
    };
    Ok(EnvVerification {
        summability,
        decay_rate,
    })
}

fn require_three_levels(sys_spec: &Spectrum, sys_state: &LogState) -> Result<()> {
    if sys_spec.len() != 3 {
        return Err(Error::invalid(format!(
            "construction expects a three-level system, got {} levels",
            sys_spec.len()
        )));
    }
    if sys_state.len() != sys_spec.len() {
        return Err(Error::invalid("state and spectrum lengths differ"));
    }
    Ok(())
}

fn require_irrational_gap_ratio(sys_spec: &Spectrum) -> Result<()> {
    let g1 = sys_spec.gap(1);
    let g2 = sys_spec.gap(2);
    if g2.ratio_to(&g1).is_some() {
        return Err(Error::precondition(
            "gap ratio is rational; the commensurable forcing path applies instead",
        ));
    }
    Ok(())
}

fn finite_drop(sys_state: &LogState, hi: usize, lo: usize) -> Result<Exact> {
    let (LogValue::Finite(a), LogValue::Finite(b)) =
        (sys_state.value(hi), sys_state.value(lo))
    else {
        return Err(Error::precondition(
            "construction needs finite populations on all referenced levels",
        ));
    };
    Ok(a - b)
}

/// Finds the unique integer vector in the search box whose frequency dot
/// product equals `target` (uniqueness follows from the incommensurable
/// frequencies).
fn search_lattice_vector(
    omega: (&Exact, &Exact),
    target: &Exact,
    bound: i64,
) -> Option<IntVec2> {
    for v1 in -bound..=bound {
        for v0 in -bound..=bound {
            let v = [v0, v1];
            if &dot(omega, v) == target {
                return Some(v);
            }
        }
    }
    None
}

/// Builds a stable non-thermal population table for a two-mode environment.
///
/// The system must have three levels with irrational gap ratio and a
/// passive, fully populated state; the mode frequencies must themselves be
/// incommensurable. Integer vectors `x`, `y` with `x·Ω = E₁−E₀` and
/// `y·Ω = E₂−E₀` are taken from `lattice` or searched in
/// `[-LATTICE_SEARCH_BOUND, LATTICE_SEARCH_BOUND]²`. Each coset
/// representative `a` receives the base population
/// `log g(a·Ω) = −base_decay · a·Ω` (rounded to a rational), and the table
/// is propagated exactly over the truncated lattice by the population
/// drops of the two matched transitions.
pub fn two_mode_counterexample(
    sys_spec: &Spectrum,
    sys_state: &LogState,
    omega: (&Exact, &Exact),
    base_decay: &Rat,
    lattice: Option<(IntVec2, IntVec2)>,
    trunc: usize,
) -> Result<CounterexampleCertificate> {
    require_three_levels(sys_spec, sys_state)?;
    require_irrational_gap_ratio(sys_spec)?;
    let basis = sys_spec.basis();
    for w in [omega.0, omega.1] {
        basis.admits(w)?;
        if w.sign(basis) != std::cmp::Ordering::Greater {
            return Err(Error::invalid("mode frequencies must be positive"));
        }
    }
    if omega.1.ratio_to(omega.0).is_some() {
        return Err(Error::precondition(
            "mode frequencies must be incommensurable",
        ));
    }
    if *base_decay <= rat(0, 1) {
        return Err(Error::invalid("base decay rate must be positive"));
    }
    if trunc < 3 {
        return Err(Error::invalid("truncation must keep at least 3 levels per mode"));
    }
    if check_passivity(sys_state, sys_spec)? != Passivity::Passive {
        return Err(Error::precondition("system state must be passive"));
    }
    let d1 = finite_drop(sys_state, 1, 0)?;
    let d2 = finite_drop(sys_state, 2, 0)?;

    let (x, y) = match lattice {
        Some((x, y)) => {
            if dot(omega, x) != sys_spec.gap(1) {
                return Err(Error::invalid(
                    "supplied x does not realize the first system gap",
                ));
            }
            if dot(omega, y) != sys_spec.gap(2) {
                return Err(Error::invalid(
                    "supplied y does not realize the second system gap",
                ));
            }
            (x, y)
        }
        None => {
            let x = search_lattice_vector(omega, &sys_spec.gap(1), LATTICE_SEARCH_BOUND);
            let y = search_lattice_vector(omega, &sys_spec.gap(2), LATTICE_SEARCH_BOUND);
            match (x, y) {
                (Some(x), Some(y)) => (x, y),
                _ => {
                    return Err(Error::NoLatticeRepresentation(format!(
                        "no integer vectors realize the gaps within the search box [-{b}, {b}]²",
                        b = LATTICE_SEARCH_BOUND
                    )))
                }
            }
        }
    };
    let cosets = coset_decomposition(x, y)?;

    let decay_f = rat_to_f64(base_decay);
    let base: Vec<Exact> = cosets
        .representatives()
        .iter()
        .map(|&a| {
            let energy = basis.eval(&dot(omega, a));
            Ok(Exact::rational(rational_approx(
                -decay_f * energy,
                BASE_ROUNDING_TOL,
            )?))
        })
        .collect::<Result<_>>()?;

    let env = multimode_spectrum(
        basis.clone(),
        vec![omega.0.clone(), omega.1.clone()],
        vec![trunc, trunc],
    )?;
    let mut logg = Vec::with_capacity(env.len());
    for flat in 0..env.len() {
        let tuple = env.tuple(flat);
        let v = [tuple[0] as i64, tuple[1] as i64];
        let (rep, z1, z2) = cosets.membership(v);
        let value = &(&base[rep] + &d1.scale(&int_rat(z1))) + &d2.scale(&int_rat(z2));
        logg.push(LogValue::Finite(value));
    }

    let verification = verify_env_table(sys_spec, sys_state, &env, &logg)?;
    Ok(CounterexampleCertificate {
        kind: CounterexampleKind::TwoMode {
            omega: (omega.0.clone(), omega.1.clone()),
            lattice: LatticePair {
                x,
                y,
                det: cosets.det(),
            },
            representatives: cosets.representatives().to_vec(),
            base_decay: base_decay.clone(),
        },
        system_gibbs: is_gibbs(sys_state, sys_spec)?,
        env_truncs: vec![trunc, trunc],
        env_logg: logg,
        summability: verification.summability,
        decay_rate: verification.decay_rate,
    })
}

/// Builds a stable non-thermal population ladder for a single-mode
/// environment.
///
/// Classifies `ω` against the three system transitions: at most one gap can
/// be an integer multiple of `ω` (the gap ratio is irrational). A match at
/// `steps · ω` fixes the ladder slope to that transition's population drop
/// spread over `steps`; with no match the constraint graph is empty and the
/// canonical decaying ladder `log g(k) = −k·ω` is used.
pub fn single_mode_counterexample(
    sys_spec: &Spectrum,
    sys_state: &LogState,
    omega: &Exact,
    trunc: usize,
) -> Result<CounterexampleCertificate> {
    require_three_levels(sys_spec, sys_state)?;
    require_irrational_gap_ratio(sys_spec)?;
    let basis = sys_spec.basis();
    basis.admits(omega)?;
    if omega.sign(basis) != std::cmp::Ordering::Greater {
        return Err(Error::invalid("mode frequency must be positive"));
    }
    if trunc < 3 {
        return Err(Error::invalid("truncation must keep at least 3 levels"));
    }

    let mut matched: Option<LadderMatch> = None;
    for (hi, lo) in [(1usize, 0usize), (2, 0), (2, 1)] {
        let gap = sys_spec.energy(hi) - sys_spec.energy(lo);
        let Some(ratio) = gap.ratio_to(omega) else { continue };
        if ratio.is_integer() {
            let steps = ratio
                .numer()
                .to_u64()
                .filter(|&s| s >= 1)
                .ok_or_else(|| Error::invalid("matched gap spans too many ladder steps"))?;
            matched = Some(LadderMatch {
                pair: (hi, lo),
                steps,
            });
            break;
        }
    }

    let logg: Vec<LogValue> = match &matched {
        Some(m) => {
            let d = finite_drop(sys_state, m.pair.0, m.pair.1)?;
            (0..trunc)
                .map(|k| LogValue::Finite(d.scale(&rat(k as i64, m.steps as i64))))
                .collect()
        }
        None => (0..trunc)
            .map(|k| LogValue::Finite(omega.scale(&int_rat(-(k as i64)))))
            .collect(),
    };

    let env = multimode_spectrum(basis.clone(), vec![omega.clone()], vec![trunc])?;
    let verification = verify_env_table(sys_spec, sys_state, &env, &logg)?;
    Ok(CounterexampleCertificate {
        kind: CounterexampleKind::SingleMode {
            omega: omega.clone(),
            matched,
        },
        system_gibbs: is_gibbs(sys_state, sys_spec)?,
        env_truncs: vec![trunc],
        env_logg: logg,
        summability: verification.summability,
        decay_rate: verification.decay_rate,
    })
}

/// The joint population ratio table, or its first well-definedness failure.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiTable {
    /// Energy gap → exact log population ratio, sorted by gap.
    Table(Vec<(Exact, LogValue)>),
    /// Two level pairs realize the same energy gap with different
    /// population ratios.
    Violation {
        gap: Exact,
        first: (usize, usize),
        second: (usize, usize),
        values: (LogValue, LogValue),
    },
}

/// Tabulates the joint population ratio against the reference pair
/// `(level 0, environment level r)` over every system/environment level
/// pair: key `E_m − E₀ + E'_n − E'_r`, value
/// `log p(m) + log g(n) − log p(0) − log g(r)`.
///
/// A stable joint state makes this a function of the gap alone; the first
/// colliding pair of entries is returned as the violation witness.
pub fn phi_table(
    sys_spec: &Spectrum,
    sys_state: &LogState,
    env_spec: &Spectrum,
    env_state: &LogState,
    r: usize,
) -> Result<PhiTable> {
    if sys_state.len() != sys_spec.len() || env_state.len() != env_spec.len() {
        return Err(Error::invalid("state and spectrum lengths differ"));
    }
    if r >= env_spec.len() {
        return Err(Error::invalid(format!(
            "reference level {r} is outside the environment truncation"
        )));
    }
    let LogValue::Finite(log_r) = env_state.value(r) else {
        return Err(Error::precondition(
            "reference environment level must have positive population",
        ));
    };
    let LogValue::Finite(log_0) = sys_state.value(0) else {
        return Err(Error::precondition(
            "ground system level must have positive population",
        ));
    };
    let reference = log_0 + log_r;
    let basis = sys_spec.basis();

    let mut entries: Vec<(Exact, LogValue)> = Vec::new();
    let mut index: HashMap<Exact, usize> = HashMap::new();
    let mut witness: Vec<(usize, usize)> = Vec::new();
    for m in 0..sys_spec.len() {
        for n in 0..env_spec.len() {
            let gap = &(sys_spec.energy(m) - sys_spec.energy(0))
                + &(env_spec.energy(n) - env_spec.energy(r));
            let value = match (sys_state.value(m), env_state.value(n)) {
                (LogValue::Finite(a), LogValue::Finite(b)) => {
                    LogValue::Finite(&(a + b) - &reference)
                }
                _ => LogValue::NegInfinity,
            };
            match index.get(&gap) {
                None => {
                    index.insert(gap.clone(), entries.len());
                    entries.push((gap, value));
                    witness.push((m, n));
                }
                Some(&at) => {
                    if entries[at].1 != value {
                        return Ok(PhiTable::Violation {
                            gap,
                            first: witness[at],
                            second: (m, n),
                            values: (entries[at].1.clone(), value),
                        });
                    }
                }
            }
        }
    }
    entries.sort_by(|(a, _), (b, _)| a.cmp_by(b, basis));
    Ok(PhiTable::Table(entries))
}

/// Exact witness that two commensurable gaps with unequal inverse
/// temperatures contradict stability: the same composite gap `k·ℓ·ω` is
/// reached through `k` wide-gap steps and through `ℓ` narrow-gap steps
/// with different population drops.
#[derive(Debug, Clone, PartialEq)]
pub struct ForcingWitness {
    pub k: u64,
    pub ell: u64,
    pub omega: Exact,
    /// `k · (log p(n) − log p(0))`.
    pub via_wide_gap: Exact,
    /// `ℓ · (log p(m) − log p(0))`.
    pub via_narrow_gap: Exact,
}

/// Verdict of the commensurable forcing argument.
#[derive(Debug, Clone, PartialEq)]
pub enum ForcingOutcome {
    /// The two inverse temperatures are forced to agree; `beta` is their
    /// common value.
    ForcedEqual {
        beta: BetaEntry,
        k: u64,
        ell: u64,
        omega: Exact,
    },
    Contradiction(ForcingWitness),
}

/// Truncation budget for the forcing ladder.
const MAX_FORCING_TRUNC: usize = 50_000;

/// Runs the single-mode forcing argument on a commensurable pair of gaps.
///
/// With `gap(m)/gap(n) = k/ℓ` in lowest terms, the oscillator at
/// `ω = gap(n)/ℓ = gap(m)/k` realizes both gaps on one ladder; iterating
/// the ratio constraints along `k·ℓ` rungs forces
/// `k·(log p(n) − log p(0)) = ℓ·(log p(m) − log p(0))`, i.e. equal inverse
/// temperatures, or yields the exact contradiction. The derivation is run
/// on the constraint engine and cross-checked against the direct
/// comparison and the ratio table.
pub fn commensurable_forcing(
    sys_spec: &Spectrum,
    sys_state: &LogState,
    pair: (usize, usize),
) -> Result<ForcingOutcome> {
    if sys_state.len() != sys_spec.len() {
        return Err(Error::invalid("state and spectrum lengths differ"));
    }
    let (m, n) = pair;
    if m == 0 || m >= n || n >= sys_spec.len() {
        return Err(Error::invalid(
            "forcing needs level indices 0 < m < n inside the spectrum",
        ));
    }
    let gm = sys_spec.gap(m);
    let gn = sys_spec.gap(n);
    let Some(ratio) = gm.ratio_to(&gn) else {
        return Err(Error::precondition(
            "gap ratio is irrational; the three-mode exchange analysis applies instead",
        ));
    };
    let k = ratio
        .numer()
        .to_u64()
        .ok_or_else(|| Error::invalid("gap ratio numerator exceeds the supported range"))?;
    let ell = ratio
        .denom()
        .to_u64()
        .ok_or_else(|| Error::invalid("gap ratio denominator exceeds the supported range"))?;
    let omega = gn.scale(&rat(1, ell as i64));
    if omega != gm.scale(&rat(1, k as i64)) {
        return Err(Error::internal("common divisor frequency must match both gaps"));
    }
    let trunc = (k as usize)
        .checked_mul(ell as usize)
        .and_then(|t| t.checked_add(1))
        .filter(|&t| t <= MAX_FORCING_TRUNC)
        .ok_or_else(|| {
            Error::TruncationTooLarge(format!(
                "forcing ladder needs {k}·{ell}+1 levels; the budget is {MAX_FORCING_TRUNC}"
            ))
        })?;
    let dm = finite_drop(sys_state, m, 0)?;
    let dn = finite_drop(sys_state, n, 0)?;

    // Restricted three-level system: the forcing argument uses only the
    // ground level and the chosen pair.
    let basis = sys_spec.basis();
    let restricted_spec = Spectrum::new(
        basis.clone(),
        vec![
            (sys_spec.energy(0).clone(), 1),
            (sys_spec.energy(m).clone(), 1),
            (sys_spec.energy(n).clone(), 1),
        ],
    )?;
    let restricted_state = LogState::new(vec![
        sys_state.value(0).clone(),
        sys_state.value(m).clone(),
        sys_state.value(n).clone(),
    ]);

    let env_spec = oscillator_spectrum(basis.clone(), &omega, trunc)?;
    let env_energies: Vec<Exact> = env_spec.levels().iter().map(|l| l.energy.clone()).collect();
    let graph = build_ratio_graph(&restricted_spec, &restricted_state, &env_energies)?;
    let solved_equal = matches!(solve_env_state(&graph), SolveOutcome::Consistent(_));

    let forced_equal = dn.scale(&int_rat(k as i64)) == dm.scale(&int_rat(ell as i64));
    if solved_equal != forced_equal {
        return Err(Error::internal(
            "constraint ladder and direct drop comparison disagree",
        ));
    }

    // Second cross-check: the canonical ladder with the narrow gap's slope
    // has a well-defined ratio table exactly in the forced-equal case.
    let ladder = LogState::new(
        (0..trunc)
            .map(|t| LogValue::Finite(dm.scale(&rat(t as i64, k as i64))))
            .collect(),
    );
    let table = phi_table(&restricted_spec, &restricted_state, &env_spec, &ladder, 0)?;
    let table_equal = matches!(table, PhiTable::Table(_));
    if table_equal != forced_equal {
        return Err(Error::internal(
            "ratio table and constraint ladder disagree",
        ));
    }

    if forced_equal {
        let beta = match dn.ratio_to(&gn) {
            Some(r) => BetaEntry::Exact(-r),
            None => BetaEntry::Approx(-basis.eval(&dn) / basis.eval(&gn)),
        };
        Ok(ForcingOutcome::ForcedEqual {
            beta,
            k,
            ell,
            omega,
        })
    } else {
        Ok(ForcingOutcome::Contradiction(ForcingWitness {
            k,
            ell,
            omega,
            via_wide_gap: dn.scale(&int_rat(k as i64)),
            via_narrow_gap: dm.scale(&int_rat(ell as i64)),
        }))
    }
}
