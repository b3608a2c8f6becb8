//! Command dispatch: execute one scenario and produce its certificate.

use serde_json::{json, Value};

use gibbsgate_core::certificate::{
    assignment_value, beta_entry_value, counterexample_value, forcing_value, gibbs_check_value,
    inconsistency_value, passivity_value, refutation_value,
};
use gibbsgate_core::constraint::{build_ratio_graph, check_summability, solve_env_state,
    SolveOutcome};
use gibbsgate_core::counterexample::{
    commensurable_forcing, single_mode_counterexample, two_mode_counterexample,
};
use gibbsgate_core::growth::check_trace_class;
use gibbsgate_core::oscillator::{multimode_spectrum, refute_gibbs};
use gibbsgate_core::rat::{format_rat, parse_rat};
use gibbsgate_core::state::{beta_profile, check_passivity, is_gibbs_with_tol};
use gibbsgate_core::{LogState, Spectrum, DEFAULT_TOL};
use gibbsgate_dynamics::{
    diagonal_embedding, first_order_stability_scan, ground_projector, scan_report_value,
};

use crate::error::{CliError, Result};
use crate::inputs::{
    load_matrix, load_spectrum, load_state, parse_counterexample_env, parse_env, parse_family,
    parse_lambdas, parse_pair, parse_usize_list, read_file, CounterexampleEnv,
};
use crate::scenario::{Command, CounterexampleMode};

fn load_pair(
    spectrum: &std::path::Path,
    state: &std::path::Path,
) -> Result<(Spectrum, LogState)> {
    let spec = load_spectrum(spectrum)?;
    let st = load_state(state)?;
    if st.len() != spec.len() {
        return Err(CliError::invalid(format!(
            "state has {} entries but the spectrum has {} levels",
            st.len(),
            spec.len()
        )));
    }
    Ok((spec, st))
}

/// Executes one command and returns its certificate JSON.
pub fn run_command(cmd: &Command) -> Result<Value> {
    match cmd {
        Command::Existence {
            family,
            beta,
            window,
        } => {
            let fam = parse_family(&read_file(family)?)?;
            let beta = parse_rat(beta).map_err(|e| CliError::invalid(format!("--beta: {e}")))?;
            let report = check_trace_class(&fam, &beta, *window)?;
            let beta0 = if report.beta0_estimate.is_finite() {
                json!(report.beta0_estimate)
            } else {
                Value::String("inf".to_string())
            };
            Ok(json!({
                "type": "trace_class",
                "beta": format_rat(&beta),
                "verdict": serde_json::to_value(report.verdict)
                    .expect("verdict names serialize"),
                "beta0": beta0,
            }))
        }

        Command::Analyze {
            spectrum,
            state,
            tol,
        } => {
            let (spec, st) = load_pair(spectrum, state)?;
            let tol = tol.unwrap_or(DEFAULT_TOL);
            if !(tol.is_finite() && tol > 0.0) {
                return Err(CliError::invalid("--tol: must be positive and finite"));
            }
            let passivity = check_passivity(&st, &spec)?;
            let gibbs = is_gibbs_with_tol(&st, &spec, tol)?;
            let profile = if st.value(0).finite().is_some() {
                let profile = beta_profile(&st, &spec)?;
                Value::Array(profile.entries().iter().map(beta_entry_value).collect())
            } else {
                Value::Null
            };
            Ok(json!({
                "type": "analysis",
                "passivity": passivity_value(&passivity),
                "beta_profile": profile,
                "gibbs": gibbs_check_value(&gibbs),
            }))
        }

        Command::Refute { spectrum, state } => {
            let (spec, st) = load_pair(spectrum, state)?;
            Ok(refutation_value(&refute_gibbs(&spec, &st)?))
        }

        Command::VerifyEnv {
            spectrum,
            state,
            env,
            trunc,
        } => {
            let (spec, st) = load_pair(spectrum, state)?;
            let desc = parse_env(&read_file(env)?)?;
            let truncs = match trunc {
                Some(flag) => parse_usize_list(flag, "--trunc")?,
                None => desc.truncs.clone().ok_or_else(|| {
                    CliError::invalid("env.truncs: missing (supply it or pass --trunc)")
                })?,
            };
            let basis = spec.basis();
            for (i, f) in desc.freqs.iter().enumerate() {
                basis.admits(f).map_err(|e| {
                    CliError::invalid(format!("env.freqs[{i}]: {e}"))
                })?;
            }
            let env = multimode_spectrum(basis.clone(), desc.freqs, truncs)?;
            let graph = build_ratio_graph(&spec, &st, env.energies())?;
            match solve_env_state(&graph) {
                SolveOutcome::Consistent(assignment) => {
                    // Summability needs at least 3 levels per mode to see a
                    // trend; shallower truncations report it unassessed.
                    let summability = if env.truncs().iter().all(|&t| t >= 3) {
                        Some(check_summability(&assignment, &env)?)
                    } else {
                        None
                    };
                    Ok(assignment_value(&assignment, summability.as_ref()))
                }
                SolveOutcome::Inconsistent(cert) => Ok(inconsistency_value(&cert)),
            }
        }

        Command::Counterexample {
            mode,
            spectrum,
            state,
            env,
            trunc,
        } => {
            let (spec, st) = load_pair(spectrum, state)?;
            let desc =
                parse_counterexample_env(&read_file(env)?, *mode == CounterexampleMode::Two)?;
            let cert = match desc {
                CounterexampleEnv::One { omega } => {
                    spec.basis()
                        .admits(&omega)
                        .map_err(|e| CliError::invalid(format!("env.omega: {e}")))?;
                    single_mode_counterexample(&spec, &st, &omega, *trunc)?
                }
                CounterexampleEnv::Two {
                    omega,
                    base_decay,
                    lattice,
                } => {
                    for (i, f) in [&omega.0, &omega.1].into_iter().enumerate() {
                        spec.basis().admits(f).map_err(|e| {
                            CliError::invalid(format!("env.omega[{i}]: {e}"))
                        })?;
                    }
                    two_mode_counterexample(
                        &spec,
                        &st,
                        (&omega.0, &omega.1),
                        &base_decay,
                        lattice,
                        *trunc,
                    )?
                }
            };
            Ok(counterexample_value(&cert))
        }

        Command::Commensurable {
            spectrum,
            state,
            pair,
        } => {
            let (spec, st) = load_pair(spectrum, state)?;
            let pair = parse_pair(pair, "--pair")?;
            Ok(forcing_value(&commensurable_forcing(&spec, &st, pair)?))
        }

        Command::Simulate {
            spectrum,
            state,
            perturbation,
            observable,
            lambdas,
        } => {
            let (spec, st) = load_pair(spectrum, state)?;
            let v = load_matrix(perturbation)?;
            let obs = match observable {
                Some(path) => load_matrix(path)?,
                None => ground_projector(spec.slot_count()),
            };
            let sys = diagonal_embedding(&spec, &st, obs)?;
            let lambdas = parse_lambdas(lambdas, "--lambdas")?;
            let scan = first_order_stability_scan(&sys, &v, &lambdas)?;
            Ok(scan_report_value(&scan))
        }
    }
}
