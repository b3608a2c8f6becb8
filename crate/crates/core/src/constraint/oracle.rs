//! Independent cross-checks for the constraint solver.
//!
//! Two deliberately different recomputations guard the main solver:
//!
//! * [`brute_force_oracle`] enumerates every joint system/environment level,
//!   groups exact degeneracies directly, assigns populations by breadth-first
//!   search, and then re-verifies every degeneracy class explicitly — no
//!   union-find, no edge thinning.
//! * [`recursion_growth_rate`] replays the forced population recursions of an
//!   instability certificate on a minimal three-mode lattice and reads off
//!   the per-step growth along the third mode, which must reproduce the
//!   certificate's `log_s`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::oscillator::{multimode_spectrum, InstabilityCertificate, MultimodeSpectrum};
use crate::spectrum::Spectrum;
use crate::state::{LogState, LogValue};

use super::{
    Component, ConstraintGraph, Edge, EnvAssignment, Provenance, SummabilityVerdict,
};

/// Joint-level budget for the exhaustive oracle.
pub const MAX_ORACLE_PAIRS: usize = 10_000;

/// Outcome of the exhaustive recomputation.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    /// A population assignment exists; `summability` is present when every
    /// mode keeps at least three levels.
    Consistent {
        assignment: EnvAssignment,
        summability: Option<SummabilityVerdict>,
    },
    /// Some degeneracy class cannot hold a single joint population.
    Mismatch,
    /// Every environment level is forced to zero population.
    NoSupport,
}

/// Recomputes the environment analysis by full joint-level enumeration.
///
/// The result is directly comparable with [`super::solve_env_state`] on the
/// graph from [`super::build_ratio_graph`]: same verdict kind, and for
/// consistent instances the identical component list and log-population
/// vector.
pub fn brute_force_oracle(
    sys_spec: &Spectrum,
    sys_state: &LogState,
    env: &MultimodeSpectrum,
) -> Result<OracleOutcome> {
    if sys_state.len() != sys_spec.len() {
        return Err(Error::invalid("state and spectrum lengths differ"));
    }
    let n_sys = sys_spec.len();
    let n_env = env.len();
    let total = n_sys
        .checked_mul(n_env)
        .filter(|&t| t <= MAX_ORACLE_PAIRS)
        .ok_or_else(|| {
            Error::TruncationTooLarge(format!(
                "oracle budget is {} joint levels, got {}x{}",
                MAX_ORACLE_PAIRS, n_sys, n_env
            ))
        })?;
    let basis = sys_spec.basis();

    // Every joint level, grouped into exact degeneracy classes.
    let mut joint: Vec<(usize, usize)> = Vec::with_capacity(total);
    for i in 0..n_sys {
        for a in 0..n_env {
            joint.push((i, a));
        }
    }
    let joint_energy =
        |&(i, a): &(usize, usize)| -> Exact { sys_spec.energy(i) + env.energy(a) };
    joint.sort_by(|x, y| {
        joint_energy(x)
            .cmp_by(&joint_energy(y), basis)
            .then_with(|| x.cmp(y))
    });
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for pair in joint {
        match classes.last_mut() {
            Some(class) if joint_energy(&class[0]) == joint_energy(&pair) => class.push(pair),
            _ => classes.push(vec![pair]),
        }
    }

    // Chain the finite-population members of each class into edges and seed
    // zeros where a zero-population system level sits in the same class as a
    // finite one.
    let mut edges: Vec<(usize, usize, Exact)> = Vec::new();
    let mut zero = vec![false; n_env];
    for class in &classes {
        let finite: Vec<&(usize, usize)> = class
            .iter()
            .filter(|(i, _)| sys_state.value(*i).is_finite())
            .collect();
        if finite.len() < class.len() {
            // A zero-population member forces every joint population in the
            // class to zero, so the finite members' environment levels die.
            for &&(_, a) in &finite {
                zero[a] = true;
            }
        }
        for w in finite.windows(2) {
            let (i, a) = *w[0];
            let (j, b) = *w[1];
            let (LogValue::Finite(li), LogValue::Finite(lj)) =
                (sys_state.value(i), sys_state.value(j))
            else {
                unreachable!("members were filtered to finite populations");
            };
            edges.push((a, b, li - lj));
        }
    }

    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_env];
    for (idx, &(a, b, _)) in edges.iter().enumerate() {
        adjacency[a].push((b, idx));
        adjacency[b].push((a, idx));
    }

    // Propagate forced zeros across edges to a fixpoint.
    let mut worklist: VecDeque<usize> =
        (0..n_env).filter(|&a| zero[a]).collect();
    while let Some(a) = worklist.pop_front() {
        for &(b, _) in &adjacency[a] {
            if !zero[b] {
                zero[b] = true;
                worklist.push_back(b);
            }
        }
    }
    if zero.iter().all(|&z| z) {
        return Ok(OracleOutcome::NoSupport);
    }

    // Components by breadth-first search, discovered in index order; assign
    // populations outward from each minimal-energy anchor.
    let mut comp_of = vec![usize::MAX; n_env];
    let mut components: Vec<Component> = Vec::new();
    let mut logg: Vec<LogValue> = vec![LogValue::NegInfinity; n_env];
    let mut values: Vec<Option<Exact>> = vec![None; n_env];
    for start in 0..n_env {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let ci = components.len();
        let mut members = Vec::new();
        let mut queue = VecDeque::from([start]);
        comp_of[start] = ci;
        while let Some(a) = queue.pop_front() {
            members.push(a);
            for &(b, _) in &adjacency[a] {
                if comp_of[b] == usize::MAX {
                    comp_of[b] = ci;
                    queue.push_back(b);
                }
            }
        }
        members.sort_unstable();
        let is_zero = zero[members[0]];
        debug_assert!(
            members.iter().all(|&m| zero[m] == is_zero),
            "zero propagation must saturate components"
        );
        let anchor = *members
            .iter()
            .min_by(|&&a, &&b| {
                env.energy(a)
                    .cmp_by(env.energy(b), basis)
                    .then_with(|| a.cmp(&b))
            })
            .expect("components are non-empty");
        if !is_zero {
            values[anchor] = Some(Exact::zero());
            let mut queue = VecDeque::from([anchor]);
            while let Some(a) = queue.pop_front() {
                let va = values[a].clone().expect("queued nodes are assigned");
                for &(b, idx) in &adjacency[a] {
                    let (from, _, offset) = &edges[idx];
                    let vb = if *from == a {
                        &va + offset
                    } else {
                        &va - offset
                    };
                    match &values[b] {
                        None => {
                            values[b] = Some(vb);
                            queue.push_back(b);
                        }
                        Some(existing) if *existing != vb => {
                            return Ok(OracleOutcome::Mismatch);
                        }
                        Some(_) => {}
                    }
                }
            }
            for &m in &members {
                logg[m] = LogValue::Finite(
                    values[m].clone().expect("component is connected"),
                );
            }
        }
        components.push(Component {
            anchor,
            members,
            zero: is_zero,
        });
    }

    // Explicit re-verification: every degeneracy class must carry one joint
    // population value.
    for class in &classes {
        let mut first_finite: Option<Exact> = None;
        let mut saw_zero = false;
        for &(i, a) in class {
            match (sys_state.value(i), &logg[a]) {
                (LogValue::Finite(li), LogValue::Finite(la)) => {
                    let value = li + la;
                    match &first_finite {
                        None => first_finite = Some(value),
                        Some(existing) if *existing != value => {
                            return Ok(OracleOutcome::Mismatch)
                        }
                        Some(_) => {}
                    }
                }
                _ => saw_zero = true,
            }
        }
        if saw_zero && first_finite.is_some() {
            return Ok(OracleOutcome::Mismatch);
        }
    }

    let assignment = EnvAssignment { components, logg };
    let summability = if env.truncs().iter().all(|&t| t >= 3) {
        Some(oracle_summability(&assignment, &comp_of, env, basis))
    } else {
        None
    };
    Ok(OracleOutcome::Consistent {
        assignment,
        summability,
    })
}

/// Mode-increment classification recomputed with coordinate tuples instead
/// of stride arithmetic.
fn oracle_summability(
    assignment: &EnvAssignment,
    comp_of: &[usize],
    env: &MultimodeSpectrum,
    basis: &crate::basis::Basis,
) -> SummabilityVerdict {
    let mut free_mode = false;
    let mut indeterminate: Option<(usize, Vec<Exact>)> = None;
    for mode in 0..env.modes() {
        let mut seen: Vec<Exact> = Vec::new();
        for flat in 0..env.len() {
            let mut tuple = env.tuple(flat);
            tuple[mode] += 1;
            if tuple[mode] >= env.truncs()[mode] {
                continue;
            }
            let next = env.flat(&tuple);
            if comp_of[flat] != comp_of[next] {
                continue;
            }
            let (LogValue::Finite(a), LogValue::Finite(b)) =
                (assignment.value(flat), assignment.value(next))
            else {
                continue;
            };
            let inc = b - a;
            if !seen.contains(&inc) {
                seen.push(inc);
            }
        }
        if seen.is_empty() {
            free_mode = true;
            continue;
        }
        if seen
            .iter()
            .any(|inc| inc.sign(basis) != std::cmp::Ordering::Less)
        {
            let rate = seen
                .iter()
                .filter(|inc| inc.sign(basis) != std::cmp::Ordering::Less)
                .max_by(|a, b| a.cmp_by(b, basis))
                .expect("filter is non-empty")
                .clone();
            return SummabilityVerdict::DivergentDirection { mode, rate };
        }
        if seen.len() > 1 && indeterminate.is_none() {
            indeterminate = Some((mode, seen));
        }
    }
    if let Some((mode, increments)) = indeterminate {
        return SummabilityVerdict::Indeterminate { mode, increments };
    }
    SummabilityVerdict::Normalizable {
        truncation_only: free_mode,
    }
}

/// Builds the minimal three-mode lattice and the recursion edges forced by
/// an instability certificate: steps in the first two modes carry the
/// system's population drops, and the exchange resonance bridges
/// `(j+p, k, l+1) ≡ (j, k+q, l)` with zero offset.
fn recursion_lattice(
    sys_spec: &Spectrum,
    sys_state: &LogState,
    cert: &InstabilityCertificate,
) -> Result<(MultimodeSpectrum, Vec<Edge>)> {
    cert.verify(sys_spec.basis())?;
    let (hi, lo) = cert.pair;
    if hi >= sys_state.len() || lo >= sys_state.len() {
        return Err(Error::invalid("certificate pair outside the state"));
    }
    let drop_of = |n: usize| -> Result<Exact> {
        let (LogValue::Finite(v), LogValue::Finite(ground)) =
            (sys_state.value(n), sys_state.value(0))
        else {
            return Err(Error::precondition(
                "population recursions need finite populations on the pair and the ground level",
            ));
        };
        Ok(v - ground)
    };
    let delta1 = drop_of(hi)?;
    let delta2 = drop_of(lo)?;
    let p = usize::try_from(cert.p)
        .ok()
        .and_then(|p| p.checked_add(2))
        .ok_or_else(|| Error::invalid("certificate p does not fit a lattice"))?;
    let q = usize::try_from(cert.q)
        .ok()
        .and_then(|q| q.checked_add(2))
        .ok_or_else(|| Error::invalid("certificate q does not fit a lattice"))?;
    let env = multimode_spectrum(
        sys_spec.basis().clone(),
        vec![
            cert.omega1.clone(),
            cert.omega2.clone(),
            cert.omega3.clone(),
        ],
        vec![p, q, 3],
    )?;
    let (step_p, step_q) = (p - 2, q - 2);

    let mut edges = Vec::new();
    for flat in 0..env.len() {
        let tuple = env.tuple(flat);
        if tuple[0] + 1 < p {
            edges.push(Edge {
                from: flat,
                to: env.flat(&[tuple[0] + 1, tuple[1], tuple[2]]),
                offset: delta1.clone(),
                provenance: Provenance::GapMatch {
                    sys_pair: (hi, 0),
                    gap: cert.omega1.clone(),
                },
            });
        }
        if tuple[1] + 1 < q {
            edges.push(Edge {
                from: flat,
                to: env.flat(&[tuple[0], tuple[1] + 1, tuple[2]]),
                offset: delta2.clone(),
                provenance: Provenance::GapMatch {
                    sys_pair: (lo, 0),
                    gap: cert.omega2.clone(),
                },
            });
        }
        if tuple[0] + step_p < p && tuple[1] + step_q < q && tuple[2] + 1 < 3 {
            let from = env.flat(&[tuple[0], tuple[1] + step_q, tuple[2]]);
            let to = env.flat(&[tuple[0] + step_p, tuple[1], tuple[2] + 1]);
            if env.energy(from) != env.energy(to) {
                return Err(Error::internal(
                    "exchange resonance must join degenerate lattice points",
                ));
            }
            edges.push(Edge {
                from,
                to,
                offset: Exact::zero(),
                provenance: Provenance::Degeneracy,
            });
        }
    }
    Ok((env, edges))
}

/// The certificate's forced recursions as a constraint graph, suitable for
/// the main solver and the summability check.
pub fn recursion_graph(
    sys_spec: &Spectrum,
    sys_state: &LogState,
    cert: &InstabilityCertificate,
) -> Result<(ConstraintGraph, MultimodeSpectrum)> {
    let (env, edges) = recursion_lattice(sys_spec, sys_state, cert)?;
    let graph = ConstraintGraph::new(
        sys_spec.basis().clone(),
        env.energies().to_vec(),
        edges,
        vec![],
    )?;
    Ok((graph, env))
}

/// Replays the forced recursions by plain breadth-first elimination and
/// returns the exact per-step log growth along the third mode.
///
/// This derives the growth from the lattice alone — the certificate's own
/// `log_s` is never read — so agreement with it is a genuine cross-check.
pub fn recursion_growth_rate(
    sys_spec: &Spectrum,
    sys_state: &LogState,
    cert: &InstabilityCertificate,
) -> Result<Exact> {
    let (env, edges) = recursion_lattice(sys_spec, sys_state, cert)?;
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); env.len()];
    for (idx, edge) in edges.iter().enumerate() {
        adjacency[edge.from].push(idx);
        adjacency[edge.to].push(idx);
    }
    let mut values: Vec<Option<Exact>> = vec![None; env.len()];
    values[0] = Some(Exact::zero());
    let mut queue = VecDeque::from([0usize]);
    while let Some(node) = queue.pop_front() {
        let val = values[node].clone().expect("queued nodes are assigned");
        for &idx in &adjacency[node] {
            let edge = &edges[idx];
            let (next, next_val) = if edge.from == node {
                (edge.to, &val + &edge.offset)
            } else {
                (edge.from, &val - &edge.offset)
            };
            match &values[next] {
                None => {
                    values[next] = Some(next_val);
                    queue.push_back(next);
                }
                Some(existing) if *existing != next_val => {
                    return Err(Error::internal(
                        "population recursions disagree along two paths",
                    ));
                }
                Some(_) => {}
            }
        }
    }
    let value_at = |tuple: &[usize]| -> Result<Exact> {
        values[env.flat(tuple)]
            .clone()
            .ok_or_else(|| Error::internal("recursion lattice is not connected"))
    };
    let base = value_at(&[0, 0, 0])?;
    let first = value_at(&[0, 0, 1])?;
    let second = value_at(&[0, 0, 2])?;
    let inc1 = &first - &base;
    let inc2 = &second - &first;
    if inc1 != inc2 {
        return Err(Error::internal(
            "growth along the third mode is not geometric",
        ));
    }
    Ok(inc1)
}
