//! Tagged certificate JSON for every analysis verdict.
//!
//! Each verdict family serializes to one JSON object with a `"type"` tag so
//! reports can be stored, transported, and re-rendered uniformly. Rational
//! scalars travel as `"num/den"` strings; exact generator combinations as
//! arrays of coordinate strings; population tables in the state-document
//! entry shape (see [`crate::json`]).

use serde_json::{json, Value};

use crate::constraint::{
    Edge, EnvAssignment, InconsistencyCertificate, Provenance, SolveOutcome, SummabilityVerdict,
};
use crate::counterexample::{
    CounterexampleCertificate, CounterexampleKind, ForcingOutcome, IntVec2,
};
use crate::exact::Exact;
use crate::json::logvalue_to_value;
use crate::oscillator::{InstabilityCertificate, LogS, Refutation};
use crate::rat::format_rat;
use crate::state::{BetaEntry, GibbsCheck, Passivity};

/// Exact scalars in certificates always use the full coordinate-array form.
fn exact_array(x: &Exact) -> Value {
    serde_json::to_value(x).expect("coordinate strings always serialize")
}

fn intvec_value(v: IntVec2) -> Value {
    json!([v[0], v[1]])
}

/// An inverse temperature: exact rationals as strings, numeric estimates as
/// numbers, zero temperature as `"inf"`.
pub fn beta_entry_value(beta: &BetaEntry) -> Value {
    match beta {
        BetaEntry::Exact(r) => Value::String(format_rat(r)),
        BetaEntry::Approx(x) => json!(x),
        BetaEntry::Infinite => Value::String("inf".to_string()),
    }
}

fn log_s_value(log_s: &LogS) -> Value {
    match log_s {
        LogS::Finite(r) => Value::String(format_rat(r)),
        LogS::Infinite => Value::String("inf".to_string()),
    }
}

/// Verdict of the thermal-form check.
pub fn gibbs_check_value(check: &GibbsCheck) -> Value {
    match check {
        GibbsCheck::Gibbs(beta) => json!({
            "verdict": "gibbs",
            "beta": beta_entry_value(beta),
        }),
        GibbsCheck::NotGibbs { witness } => json!({
            "verdict": "not_gibbs",
            "witness": [witness.0, witness.1],
        }),
    }
}

/// Passivity screen result.
pub fn passivity_value(p: &Passivity) -> Value {
    match p {
        Passivity::Passive => json!({"verdict": "passive"}),
        Passivity::Violation(a, b) => json!({
            "verdict": "violation",
            "witness": [a, b],
        }),
    }
}

/// The three-mode instability certificate.
pub fn instability_value(c: &InstabilityCertificate) -> Value {
    json!({
        "type": "instability",
        "pair": [c.pair.0, c.pair.1],
        "p": c.p,
        "q": c.q,
        "omega1": exact_array(&c.omega1),
        "omega2": exact_array(&c.omega2),
        "omega3": exact_array(&c.omega3),
        "log_s": log_s_value(&c.log_s),
        "beta_high": beta_entry_value(&c.beta_high),
        "beta_low": beta_entry_value(&c.beta_low),
        "witness": c.witness,
    })
}

/// Any outcome of the thermal-form refutation scan.
pub fn refutation_value(r: &Refutation) -> Value {
    match r {
        Refutation::Gibbs(beta) => json!({
            "type": "gibbs",
            "beta": beta_entry_value(beta),
        }),
        Refutation::Instability(c) => instability_value(c),
        Refutation::ApproximateInstability {
            pair,
            beta_high,
            beta_low,
        } => json!({
            "type": "approximate_instability",
            "pair": [pair.0, pair.1],
            "beta_high": beta_high,
            "beta_low": beta_low,
        }),
        Refutation::StructureViolation { witness } => json!({
            "type": "structure_violation",
            "witness": [witness.0, witness.1],
        }),
    }
}

fn provenance_value(p: &Provenance) -> Value {
    match p {
        Provenance::Degeneracy => json!({"kind": "degeneracy"}),
        Provenance::GapMatch { sys_pair, gap } => json!({
            "kind": "gap_match",
            "sys_pair": [sys_pair.0, sys_pair.1],
            "gap": exact_array(gap),
        }),
    }
}

fn edge_value(e: &Edge) -> Value {
    json!({
        "from": e.from,
        "to": e.to,
        "offset": exact_array(&e.offset),
        "provenance": provenance_value(&e.provenance),
    })
}

/// Exact inconsistency witness from the constraint solver.
pub fn inconsistency_value(c: &InconsistencyCertificate) -> Value {
    match c {
        InconsistencyCertificate::CycleMismatch { cycle, mismatch } => json!({
            "type": "inconsistency",
            "kind": "cycle_mismatch",
            "cycle": cycle.iter().map(edge_value).collect::<Vec<_>>(),
            "mismatch": exact_array(mismatch),
        }),
        InconsistencyCertificate::NoSupport { marks } => json!({
            "type": "inconsistency",
            "kind": "no_support",
            "marks": marks
                .iter()
                .map(|m| {
                    json!({
                        "node": m.node,
                        "sys_zero": m.sys_zero,
                        "sys_finite": m.sys_finite,
                    })
                })
                .collect::<Vec<_>>(),
        }),
    }
}

/// Verdict of the summability check.
pub fn summability_value(s: &SummabilityVerdict) -> Value {
    match s {
        SummabilityVerdict::Normalizable { truncation_only } => json!({
            "verdict": "normalizable",
            "truncation_only": truncation_only,
        }),
        SummabilityVerdict::DivergentDirection { mode, rate } => json!({
            "verdict": "divergent",
            "mode": mode,
            "rate": exact_array(rate),
        }),
        SummabilityVerdict::Indeterminate { mode, increments } => json!({
            "verdict": "indeterminate",
            "mode": mode,
            "increments": increments.iter().map(exact_array).collect::<Vec<_>>(),
        }),
    }
}

/// A solved environment assignment with its optional summability verdict.
pub fn assignment_value(a: &EnvAssignment, summability: Option<&SummabilityVerdict>) -> Value {
    json!({
        "type": "env_assignment",
        "components": a
            .components()
            .iter()
            .map(|c| {
                json!({
                    "anchor": c.anchor,
                    "members": c.members,
                    "zero": c.zero,
                })
            })
            .collect::<Vec<_>>(),
        "logg": a.logg().iter().map(logvalue_to_value).collect::<Vec<_>>(),
        "summability": summability.map(summability_value),
    })
}

/// Either branch of a constraint solve as one tagged object.
pub fn solve_value(outcome: &SolveOutcome, summability: Option<&SummabilityVerdict>) -> Value {
    match outcome {
        SolveOutcome::Consistent(a) => assignment_value(a, summability),
        SolveOutcome::Inconsistent(c) => inconsistency_value(c),
    }
}

/// A stable-but-not-thermal environment construction.
pub fn counterexample_value(c: &CounterexampleCertificate) -> Value {
    let mut body = match &c.kind {
        CounterexampleKind::SingleMode { omega, matched } => json!({
            "type": "counterexample",
            "modes": 1,
            "omega": exact_array(omega),
            "matched": matched.as_ref().map(|m| {
                json!({
                    "pair": [m.pair.0, m.pair.1],
                    "steps": m.steps,
                })
            }),
        }),
        CounterexampleKind::TwoMode {
            omega,
            lattice,
            representatives,
            base_decay,
        } => json!({
            "type": "counterexample",
            "modes": 2,
            "omega": [exact_array(&omega.0), exact_array(&omega.1)],
            "lattice": {
                "x": intvec_value(lattice.x),
                "y": intvec_value(lattice.y),
                "det": lattice.det,
                "representatives": representatives
                    .iter()
                    .map(|&r| intvec_value(r))
                    .collect::<Vec<_>>(),
            },
            "base_decay": format_rat(base_decay),
        }),
    };
    let extra = json!({
        "system_gibbs": gibbs_check_value(&c.system_gibbs),
        "env_truncs": c.env_truncs,
        "env_logg": c.env_logg.iter().map(logvalue_to_value).collect::<Vec<_>>(),
        "summability": summability_value(&c.summability),
        "decay_rate": c.decay_rate,
    });
    let map = body.as_object_mut().expect("certificate body is an object");
    for (k, v) in extra.as_object().expect("extension is an object") {
        map.insert(k.clone(), v.clone());
    }
    body
}

/// Verdict of the commensurable forcing argument.
pub fn forcing_value(f: &ForcingOutcome) -> Value {
    match f {
        ForcingOutcome::ForcedEqual {
            beta,
            k,
            ell,
            omega,
        } => json!({
            "type": "forcing",
            "verdict": "forced_equal",
            "beta": beta_entry_value(beta),
            "k": k,
            "ell": ell,
            "omega": exact_array(omega),
        }),
        ForcingOutcome::Contradiction(w) => json!({
            "type": "forcing",
            "verdict": "contradiction",
            "k": w.k,
            "ell": w.ell,
            "omega": exact_array(&w.omega),
            "via_wide_gap": exact_array(&w.via_wide_gap),
            "via_narrow_gap": exact_array(&w.via_narrow_gap),
        }),
    }
}
