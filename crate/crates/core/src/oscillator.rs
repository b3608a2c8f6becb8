//! Harmonic-oscillator environments and the three-mode refutation.
//!
//! A passive state whose β-profile is not constant cannot stay stationary
//! once coupled to a suitably tuned three-mode oscillator bath: picking a
//! level pair with β_n > β_m and coprime integers p, q with
//! `ω₁/ω₂ < q/p < (β_n/β_m)·(ω₁/ω₂)` makes the third frequency
//! `ω₃ = -p·ω₁ + q·ω₂` positive while forcing the bath populations along the
//! third mode to grow geometrically with log-rate
//! `log s = β_n·p·ω₁ - β_m·q·ω₂ > 0` — no normalizable bath state exists.
//! [`InstabilityCertificate`] records the construction; [`refute_gibbs`]
//! drives the pair search.

use std::sync::Arc;

use num::integer::gcd;
use num::{BigInt, ToPrimitive, Zero};

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::rat::{format_rat, simplest_in_open, Rat};
use crate::spectrum::{Origin, Spectrum};
use crate::state::{beta_profile, check_passivity, BetaEntry, LogState, Passivity};
use crate::DEFAULT_TOL;

/// Maximum number of joint levels a multimode enumeration may produce.
pub const MAX_JOINT_LEVELS: usize = 5_000_000;

/// Single harmonic ladder: `E_n = ω·(n + 1/2)` for n = 0..levels-1.
pub fn oscillator_spectrum(basis: Arc<Basis>, omega: &Exact, levels: usize) -> Result<Spectrum> {
    if omega.sign(&basis) != std::cmp::Ordering::Greater {
        return Err(Error::invalid("oscillator frequency must be positive"));
    }
    if levels == 0 {
        return Err(Error::invalid("oscillator ladder needs at least one level"));
    }
    let raw = (0..levels)
        .map(|n| {
            let factor = Rat::new(BigInt::from(2 * n as u64 + 1), BigInt::from(2));
            (omega.scale(&factor), 1)
        })
        .collect();
    let origin = Origin::Oscillator {
        omega: omega.clone(),
        levels,
    };
    Spectrum::with_origin(basis, raw, Some(origin))
}

/// Product of up to three harmonic ladders, enumerated over the full
/// truncation box. Point indices are row-major with the last mode fastest;
/// exactly degenerate points share a level in the induced [`Spectrum`] view
/// but keep their distinct indices.
#[derive(Debug, Clone)]
pub struct MultimodeSpectrum {
    basis: Arc<Basis>,
    freqs: Vec<Exact>,
    truncs: Vec<usize>,
    energies: Vec<Exact>,
}

impl MultimodeSpectrum {
    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn modes(&self) -> usize {
        self.freqs.len()
    }

    pub fn freqs(&self) -> &[Exact] {
        &self.freqs
    }

    pub fn truncs(&self) -> &[usize] {
        &self.truncs
    }

    /// Number of joint points in the truncation box.
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energies(&self) -> &[Exact] {
        &self.energies
    }

    /// Flat index of an occupation tuple.
    pub fn flat(&self, tuple: &[usize]) -> usize {
        assert_eq!(tuple.len(), self.truncs.len(), "tuple arity mismatch");
        let mut idx = 0;
        for (n, t) in tuple.iter().zip(&self.truncs) {
            assert!(n < t, "occupation {n} outside truncation {t}");
            idx = idx * t + n;
        }
        idx
    }

    /// Occupation tuple of a flat index.
    pub fn tuple(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.truncs.len()];
        for i in (0..self.truncs.len()).rev() {
            out[i] = flat % self.truncs[i];
            flat /= self.truncs[i];
        }
        out
    }

    pub fn energy(&self, flat: usize) -> &Exact {
        &self.energies[flat]
    }

    /// The induced plain spectrum: distinct exact energies with
    /// multiplicities, together with the flat point indices behind each
    /// level, in level order.
    pub fn spectrum_view(&self) -> Result<(Spectrum, Vec<Vec<usize>>)> {
        let mut groups: Vec<(Exact, Vec<usize>)> = Vec::new();
        for (idx, e) in self.energies.iter().enumerate() {
            match groups.iter_mut().find(|(g, _)| g == e) {
                Some((_, members)) => members.push(idx),
                None => groups.push((e.clone(), vec![idx])),
            }
        }
        groups.sort_by(|a, b| a.0.cmp_by(&b.0, &self.basis));
        let raw = groups
            .iter()
            .map(|(e, members)| (e.clone(), members.len() as u32))
            .collect();
        let origin = Origin::Multimode {
            freqs: self.freqs.clone(),
            truncs: self.truncs.clone(),
        };
        let spec = Spectrum::with_origin(self.basis.clone(), raw, Some(origin))?;
        let members = groups.into_iter().map(|(_, m)| m).collect();
        Ok((spec, members))
    }
}

/// Builds the joint spectrum of 1–3 oscillator modes with per-mode
/// truncations: `E(n₁,…) = Σ ω_i (n_i + 1/2)`.
pub fn multimode_spectrum(
    basis: Arc<Basis>,
    freqs: Vec<Exact>,
    truncs: Vec<usize>,
) -> Result<MultimodeSpectrum> {
    if freqs.is_empty() || freqs.len() > 3 {
        return Err(Error::invalid("multimode environments use 1 to 3 modes"));
    }
    if freqs.len() != truncs.len() {
        return Err(Error::invalid("one truncation per mode is required"));
    }
    if truncs.iter().any(|&t| t == 0) {
        return Err(Error::invalid("each mode needs at least one level"));
    }
    for f in &freqs {
        if f.sign(&basis) != std::cmp::Ordering::Greater {
            return Err(Error::invalid("mode frequencies must be positive"));
        }
    }
    let total: usize = truncs.iter().product();
    if total > MAX_JOINT_LEVELS {
        return Err(Error::TruncationTooLarge(format!(
            "joint truncation enumerates {total} points (limit {MAX_JOINT_LEVELS})"
        )));
    }
    let half = Rat::new(BigInt::from(1), BigInt::from(2));
    // Per-mode ladders ω_i·(n + 1/2), then the row-major product sum.
    let ladders: Vec<Vec<Exact>> = freqs
        .iter()
        .zip(&truncs)
        .map(|(f, &t)| {
            (0..t)
                .map(|n| f.scale(&(Rat::from_integer(BigInt::from(n as u64)) + &half)))
                .collect()
        })
        .collect();
    let mut energies = vec![Exact::zero(); total];
    for (flat, slot) in energies.iter_mut().enumerate() {
        let mut rem = flat;
        let mut sum = Exact::zero();
        for i in (0..truncs.len()).rev() {
            sum = &sum + &ladders[i][rem % truncs[i]];
            rem /= truncs[i];
        }
        *slot = sum;
    }
    Ok(MultimodeSpectrum {
        basis,
        freqs,
        truncs,
        energies,
    })
}

/// Result of the interval search for attack integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PqChoice {
    /// Coprime p, q > 0 with `ω₁/ω₂ < q/p < (β_n/β_m)·(ω₁/ω₂)`.
    Pq { p: u64, q: u64 },
    /// β_n = β_m: the open interval is empty and the pair is consistent.
    NoAttackPossible,
}

/// Picks the attack integers for a level pair: the fraction q/p of minimal
/// denominator (then minimal numerator) strictly inside
/// `(ω₁/ω₂, (β_n/β_m)·(ω₁/ω₂))`.
pub fn choose_pq(
    basis: &Basis,
    omega1: &Exact,
    omega2: &Exact,
    beta_n: &Rat,
    beta_m: &Rat,
) -> Result<PqChoice> {
    if beta_m <= &Rat::zero() {
        return Err(Error::invalid("inverse temperatures must be positive"));
    }
    if beta_n < beta_m {
        return Err(Error::invalid(
            "pair must be ordered with the larger inverse temperature first",
        ));
    }
    if omega1.sign(basis) != std::cmp::Ordering::Greater
        || omega2.sign(basis) != std::cmp::Ordering::Greater
    {
        return Err(Error::invalid("attack frequencies must be positive"));
    }
    let ratio = omega1.ratio_to(omega2).ok_or_else(|| {
        Error::UnsupportedAttackPair(
            "frequency ratio ω₁/ω₂ is not rational; no exact attack integers exist".into(),
        )
    })?;
    if beta_n == beta_m {
        return Ok(PqChoice::NoAttackPossible);
    }
    let hi = &ratio * &(beta_n / beta_m);
    let pick = simplest_in_open(&ratio, &hi)?;
    let q = pick
        .numer()
        .to_u64()
        .ok_or_else(|| Error::internal("attack numerator exceeds u64"))?;
    let p = pick
        .denom()
        .to_u64()
        .ok_or_else(|| Error::internal("attack denominator exceeds u64"))?;
    Ok(PqChoice::Pq { p, q })
}

/// Geometric growth rate of the forced bath populations along the third
/// mode; infinite when the pair mixes zero and nonzero populations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogS {
    Finite(Rat),
    Infinite,
}

impl std::fmt::Display for LogS {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LogS::Finite(r) => write!(f, "{}", format_rat(r)),
            LogS::Infinite => write!(f, "inf"),
        }
    }
}

/// Certificate that no normalizable environment state can stabilize the
/// state: the three-mode bath at frequencies ω₁, ω₂, ω₃ forces
/// `p(0,0,ℓ) = p(0,0,0)·s^ℓ` with `log s > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InstabilityCertificate {
    /// Level pair (n, m), ordered so level n has the larger β.
    pub pair: (usize, usize),
    pub p: u64,
    pub q: u64,
    /// ω₁ = E_n − E₀.
    pub omega1: Exact,
    /// ω₂ = E_m − E₀.
    pub omega2: Exact,
    /// ω₃ = −p·ω₁ + q·ω₂, positive.
    pub omega3: Exact,
    /// log s = β_n·p·ω₁ − β_m·q·ω₂, positive.
    pub log_s: LogS,
    pub beta_high: BetaEntry,
    pub beta_low: BetaEntry,
    /// Human-readable statement of the geometric-growth witness.
    pub witness: String,
}

impl InstabilityCertificate {
    /// Log-population decrements per single quantum of modes 1 and 2
    /// (β_n·ω₁ and β_m·ω₂), available when the certificate is exact.
    pub fn mode_decays(&self) -> Option<(Rat, Rat)> {
        let bh = self.beta_high.exact()?;
        let bl = self.beta_low.exact()?;
        let w1 = self.omega1.as_rational()?;
        let w2 = self.omega2.as_rational()?;
        Some((bh * &w1, bl * &w2))
    }

    /// Re-derives every invariant from the stored fields by exact
    /// arithmetic; any failure is an internal-check error.
    pub fn verify(&self, basis: &Basis) -> Result<()> {
        if self.p == 0 || self.q == 0 {
            return Err(Error::internal("attack integers must be positive"));
        }
        if gcd(self.p, self.q) != 1 {
            return Err(Error::internal("attack integers are not coprime"));
        }
        let p_rat = Rat::from_integer(BigInt::from(self.p));
        let q_rat = Rat::from_integer(BigInt::from(self.q));
        let rebuilt = &self.omega2.scale(&q_rat) - &self.omega1.scale(&p_rat);
        if rebuilt != self.omega3 {
            return Err(Error::internal("ω₃ does not match −p·ω₁ + q·ω₂"));
        }
        if self.omega3.sign(basis) != std::cmp::Ordering::Greater {
            return Err(Error::internal("ω₃ is not positive"));
        }
        match (&self.log_s, &self.beta_high, &self.beta_low) {
            (LogS::Finite(log_s), BetaEntry::Exact(bh), BetaEntry::Exact(bl)) => {
                if bl <= &Rat::zero() || bh <= bl {
                    return Err(Error::internal(
                        "certificate requires β_high > β_low > 0",
                    ));
                }
                let w1 = self
                    .omega1
                    .as_rational()
                    .ok_or_else(|| Error::internal("exact certificate with irrational ω₁"))?;
                let w2 = self
                    .omega2
                    .as_rational()
                    .ok_or_else(|| Error::internal("exact certificate with irrational ω₂"))?;
                let expected = &(bh * &p_rat * &w1) - &(bl * &q_rat * &w2);
                if &expected != log_s {
                    return Err(Error::internal("log s does not match β_n·p·ω₁ − β_m·q·ω₂"));
                }
                if log_s <= &Rat::zero() {
                    return Err(Error::internal("log s is not positive"));
                }
                // Interval membership, the form the growth condition takes
                // before multiplying out.
                let lo = &w1 / &w2;
                let hi = &lo * &(bh / bl);
                let frac = &q_rat / &p_rat;
                if !(lo < frac && frac < hi) {
                    return Err(Error::internal("q/p escapes the admissible open interval"));
                }
                Ok(())
            }
            (LogS::Infinite, BetaEntry::Infinite, bl) => {
                if bl.is_infinite() {
                    return Err(Error::internal(
                        "degenerate certificate needs a populated lower level",
                    ));
                }
                Ok(())
            }
            _ => Err(Error::internal(
                "certificate mixes finite and infinite fields inconsistently",
            )),
        }
    }
}

/// Outcome of attacking one level pair.
#[derive(Debug, Clone, PartialEq)]
pub enum AttackOutcome {
    Certificate(InstabilityCertificate),
    /// Equal inverse temperatures: the pair imposes no obstruction.
    PairConsistent,
}

fn exact_beta(state: &LogState, spec: &Spectrum, level: usize) -> Result<Rat> {
    let log0 = state
        .value(0)
        .finite()
        .ok_or_else(|| Error::precondition("ground-level population must be nonzero"))?;
    let logn = state.value(level).finite().ok_or_else(|| {
        Error::precondition(format!(
            "level {level} has zero population; the pair attack needs finite β"
        ))
    })?;
    let drop = log0 - logn;
    let gap = spec.gap(level);
    drop.ratio_to(&gap).ok_or_else(|| {
        Error::UnsupportedAttackPair(format!(
            "β at level {level} is not an exact rational; no exact certificate exists"
        ))
    })
}

fn witness_text(p: u64, q: u64, log_s: &LogS) -> String {
    match log_s {
        LogS::Finite(r) => format!(
            "stationarity forces p(0,0,l) = p(0,0,0)·exp({}·l): each unit step up \
             the third mode trades {p} quanta of mode 1 for {q} quanta of mode 2, \
             and the traded populations do not balance",
            format_rat(r)
        ),
        LogS::Infinite => format!(
            "stationarity forces p(0,0,l) to grow by an infinite log-factor per \
             step (a zero system population is paired with a nonzero one); the \
             exchange trades {p} quanta of mode 1 for {q} quanta of mode 2"
        ),
    }
}

/// Attacks one level pair: orders it by β, picks (p, q), and builds the
/// certificate. Both gaps must be positive rational multiples of the unit
/// generator and both β values exact and finite.
pub fn attack_pair(
    spec: &Spectrum,
    state: &LogState,
    n: usize,
    m: usize,
) -> Result<AttackOutcome> {
    if state.len() != spec.len() {
        return Err(Error::invalid("state and spectrum lengths differ"));
    }
    if n == m || n >= spec.len() || m >= spec.len() {
        return Err(Error::precondition("attack needs two distinct valid levels"));
    }
    if n == 0 || m == 0 {
        return Err(Error::precondition(
            "attack levels must sit strictly above the ground level",
        ));
    }
    let beta_n = exact_beta(state, spec, n)?;
    let beta_m = exact_beta(state, spec, m)?;
    let ((hi_level, beta_hi), (lo_level, beta_lo)) = if beta_n >= beta_m {
        ((n, beta_n), (m, beta_m))
    } else {
        ((m, beta_m), (n, beta_n))
    };
    let omega1 = spec.gap(hi_level);
    let omega2 = spec.gap(lo_level);
    if omega1.as_rational().is_none() || omega2.as_rational().is_none() {
        return Err(Error::UnsupportedAttackPair(
            "attack gaps must be rational multiples of the unit generator".into(),
        ));
    }
    let basis = spec.basis();
    let (p, q) = match choose_pq(basis, &omega1, &omega2, &beta_hi, &beta_lo)? {
        PqChoice::NoAttackPossible => return Ok(AttackOutcome::PairConsistent),
        PqChoice::Pq { p, q } => (p, q),
    };
    let p_rat = Rat::from_integer(BigInt::from(p));
    let q_rat = Rat::from_integer(BigInt::from(q));
    let omega3 = &omega2.scale(&q_rat) - &omega1.scale(&p_rat);
    let w1 = omega1.as_rational().expect("checked rational above");
    let w2 = omega2.as_rational().expect("checked rational above");
    let log_s_value = &(&beta_hi * &p_rat * &w1) - &(&beta_lo * &q_rat * &w2);
    // Both signs are consequences of the interval choice; a failure here is
    // a bug, not an input problem.
    if omega3.sign(basis) != std::cmp::Ordering::Greater {
        return Err(Error::internal("constructed ω₃ is not positive"));
    }
    if log_s_value <= Rat::zero() {
        return Err(Error::internal("constructed log s is not positive"));
    }
    let log_s = LogS::Finite(log_s_value);
    let certificate = InstabilityCertificate {
        pair: (hi_level, lo_level),
        p,
        q,
        omega1,
        omega2,
        omega3,
        witness: witness_text(p, q, &log_s),
        log_s,
        beta_high: BetaEntry::Exact(beta_hi),
        beta_low: BetaEntry::Exact(beta_lo),
    };
    certificate.verify(basis)?;
    Ok(AttackOutcome::Certificate(certificate))
}

/// Degenerate attack for a pair mixing zero and nonzero populations: any
/// q/p above ω₁/ω₂ works and the growth rate is infinite.
fn degenerate_certificate(
    spec: &Spectrum,
    beta_low: BetaEntry,
    zero_level: usize,
    finite_level: usize,
) -> Result<InstabilityCertificate> {
    let basis = spec.basis();
    let omega1 = spec.gap(zero_level);
    let omega2 = spec.gap(finite_level);
    let p = 1u64;
    let mut q = {
        let approx = omega1.eval(basis) / omega2.eval(basis);
        approx.floor().max(0.0) as u64 + 1
    };
    let omega3 = loop {
        let q_rat = Rat::from_integer(BigInt::from(q));
        let candidate = &omega2.scale(&q_rat) - &omega1;
        if candidate.sign(basis) == std::cmp::Ordering::Greater {
            break candidate;
        }
        q += 1;
    };
    let log_s = LogS::Infinite;
    let certificate = InstabilityCertificate {
        pair: (zero_level, finite_level),
        p,
        q,
        omega1,
        omega2,
        omega3,
        witness: witness_text(p, q, &log_s),
        log_s,
        beta_high: BetaEntry::Infinite,
        beta_low,
    };
    certificate.verify(basis)?;
    Ok(certificate)
}

/// Verdict of the full refutation scan.
#[derive(Debug, Clone, PartialEq)]
pub enum Refutation {
    /// The state is thermal at the reported inverse temperature.
    Gibbs(BetaEntry),
    /// An exact three-mode instability certificate.
    Instability(InstabilityCertificate),
    /// A pair with mismatched inverse temperatures exists, but one side is
    /// not exactly representable (irrational gap data), so only a numeric
    /// mismatch report is possible.
    ApproximateInstability {
        pair: (usize, usize),
        beta_high: f64,
        beta_low: f64,
    },
    /// The state is not even passive: populations fail to decrease between
    /// the witnessed adjacent levels.
    StructureViolation { witness: (usize, usize) },
}

/// Decides the thermal form by certificate: passivity screen, the
/// zero-temperature branch, then a pair scan in order of increasing gap
/// that returns the first exact instability certificate. Pairs that
/// mismatch only approximately are reported if no exact certificate exists
/// anywhere.
pub fn refute_gibbs(spec: &Spectrum, state: &LogState) -> Result<Refutation> {
    if state.len() != spec.len() {
        return Err(Error::invalid("state and spectrum lengths differ"));
    }
    if let Passivity::Violation(n, m) = check_passivity(state, spec)? {
        return Ok(Refutation::StructureViolation { witness: (n, m) });
    }
    if state.value(0).finite().is_none() {
        return Err(Error::invalid(
            "state has no populated level; refutation undefined",
        ));
    }
    if state.support_is_ground_only() {
        return Ok(Refutation::Gibbs(BetaEntry::Infinite));
    }
    let profile = beta_profile(state, spec)?;
    let mut approx_mismatch: Option<(usize, usize, f64, f64)> = None;
    // Levels sort by energy, so (b ascending, a ascending) is exactly
    // "increasing gap, then increasing level index".
    for b in 2..spec.len() {
        for a in 1..b {
            let beta_a = profile.beta(a);
            let beta_b = profile.beta(b);
            match (beta_a, beta_b) {
                (BetaEntry::Infinite, BetaEntry::Infinite) => continue,
                (BetaEntry::Infinite, finite) => {
                    // Passivity puts the zero population on the higher level,
                    // so this arm is unreachable; handle it symmetrically
                    // anyway.
                    let cert = degenerate_certificate(spec, finite.clone(), a, b)?;
                    return Ok(Refutation::Instability(cert));
                }
                (finite, BetaEntry::Infinite) => {
                    let cert = degenerate_certificate(spec, finite.clone(), b, a)?;
                    return Ok(Refutation::Instability(cert));
                }
                (fa, fb) => {
                    if fa.agrees_with(fb, DEFAULT_TOL) {
                        continue;
                    }
                    let exact_pair = fa.exact().is_some()
                        && fb.exact().is_some()
                        && spec.gap(a).as_rational().is_some()
                        && spec.gap(b).as_rational().is_some();
                    if exact_pair {
                        match attack_pair(spec, state, b, a)? {
                            AttackOutcome::Certificate(cert) => {
                                return Ok(Refutation::Instability(cert))
                            }
                            AttackOutcome::PairConsistent => {
                                return Err(Error::internal(
                                    "distinct exact β reported consistent by the pair attack",
                                ))
                            }
                        }
                    }
                    if approx_mismatch.is_none() {
                        let (x, y) = (fa.as_f64(), fb.as_f64());
                        let (hi, lo, hi_level, lo_level) = if x >= y {
                            (x, y, a, b)
                        } else {
                            (y, x, b, a)
                        };
                        approx_mismatch = Some((hi_level, lo_level, hi, lo));
                    }
                }
            }
        }
    }
    if let Some((hi_level, lo_level, hi, lo)) = approx_mismatch {
        return Ok(Refutation::ApproximateInstability {
            pair: (hi_level, lo_level),
            beta_high: hi,
            beta_low: lo,
        });
    }
    let rep = profile
        .entries()
        .iter()
        .find(|e| e.exact().is_some())
        .or_else(|| profile.entries().first())
        .cloned()
        .unwrap_or(BetaEntry::Infinite);
    Ok(Refutation::Gibbs(rep))
}
