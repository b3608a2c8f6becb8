//! Deterministic human-readable rendering of certificate JSON.
//!
//! Every certificate type maps to a fixed text layout: a `verdict:` line,
//! indented detail lines, and where the verdict carries physical meaning an
//! interpretation line in plain language. Rendering is a pure function of
//! the JSON, so identical certificates always produce identical bytes, and
//! a report that round-trips through its own JSON re-renders unchanged.

use serde_json::Value;

use crate::error::{CliError, Result};

fn field<'a>(cert: &'a Value, key: &str) -> Result<&'a Value> {
    cert.get(key)
        .ok_or_else(|| CliError::internal(format!("certificate is missing field \"{key}\"")))
}

fn str_field<'a>(cert: &'a Value, key: &str) -> Result<&'a str> {
    field(cert, key)?.as_str().ok_or_else(|| {
        CliError::internal(format!("certificate field \"{key}\" is not a string"))
    })
}

fn arr_field<'a>(cert: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(cert, key)?.as_array().ok_or_else(|| {
        CliError::internal(format!("certificate field \"{key}\" is not an array"))
    })
}

/// Renders a scalar leaf: strings bare, numbers in their JSON spelling.
fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Renders an exact value (an array of coordinate strings): a lone
/// coordinate bare, several as a tuple.
fn exact(v: &Value) -> String {
    match v.as_array() {
        Some(coords) if coords.len() == 1 => scalar(&coords[0]),
        Some(coords) => {
            let parts: Vec<String> = coords.iter().map(scalar).collect();
            format!("({})", parts.join(", "))
        }
        None => scalar(v),
    }
}

fn exact_field(cert: &Value, key: &str) -> Result<String> {
    Ok(exact(field(cert, key)?))
}

fn scalar_field(cert: &Value, key: &str) -> Result<String> {
    Ok(scalar(field(cert, key)?))
}

fn index_pair(cert: &Value, key: &str) -> Result<(String, String)> {
    let arr = arr_field(cert, key)?;
    if arr.len() != 2 {
        return Err(CliError::internal(format!(
            "certificate field \"{key}\" is not an index pair"
        )));
    }
    Ok((scalar(&arr[0]), scalar(&arr[1])))
}

fn beta_text(v: &Value) -> String {
    match v {
        Value::String(s) if s == "inf" => "infinite".to_string(),
        other => scalar(other),
    }
}

fn render_gibbs(cert: &Value, lines: &mut Vec<String>) -> Result<()> {
    lines.push("verdict: thermal state".to_string());
    let beta = field(cert, "beta")?;
    if beta.as_str() == Some("inf") {
        lines.push(
            "  inverse temperature: infinite — zero temperature / ground-state projector"
                .to_string(),
        );
    } else {
        lines.push(format!("  inverse temperature: beta = {}", scalar(beta)));
    }
    Ok(())
}

fn render_instability(cert: &Value, lines: &mut Vec<String>) -> Result<()> {
    let (n, m) = index_pair(cert, "pair")?;
    lines.push("verdict: instability certificate".to_string());
    lines.push(format!("  level pair: ({n}, {m})"));
    lines.push(format!(
        "  inverse temperatures: beta_high = {}, beta_low = {}",
        beta_text(field(cert, "beta_high")?),
        beta_text(field(cert, "beta_low")?)
    ));
    lines.push(format!(
        "  multipliers: p = {}, q = {}",
        scalar_field(cert, "p")?,
        scalar_field(cert, "q")?
    ));
    lines.push(format!(
        "  mode frequencies: omega1 = {}, omega2 = {}, omega3 = {}",
        exact_field(cert, "omega1")?,
        exact_field(cert, "omega2")?,
        exact_field(cert, "omega3")?
    ));
    lines.push(format!(
        "  joint growth exponent: log_s = {}",
        scalar_field(cert, "log_s")?
    ));
    lines.push(format!("  witness: {}", str_field(cert, "witness")?));
    lines.push(
        "  second-order stability violated: coupling to the three-mode oscillator \
         (ω₁, ω₂, ω₃) admits no normalizable environment state"
            .to_string(),
    );
    Ok(())
}

fn render_approximate_instability(cert: &Value, lines: &mut Vec<String>) -> Result<()> {
    let (n, m) = index_pair(cert, "pair")?;
    lines.push("verdict: approximate instability".to_string());
    lines.push(format!("  level pair: ({n}, {m})"));
    lines.push(format!(
        "  numeric inverse temperatures: beta_high = {}, beta_low = {}",
        scalar_field(cert, "beta_high")?,
        scalar_field(cert, "beta_low")?
    ));
    lines.push(
        "  temperatures differ beyond tolerance, but the gap data is not exactly \
         representable: no exact certificate is emitted"
            .to_string(),
    );
    Ok(())
}

fn render_structure_violation(cert: &Value, lines: &mut Vec<String>) -> Result<()> {
    let (n, m) = index_pair(cert, "witness")?;
    lines.push("verdict: structure violation".to_string());
    lines.push(format!(
        "  population does not decrease with energy between levels {n} and {m}"
    ));
    lines.push(
        "  the state is not passive, so it is not a decreasing function of the Hamiltonian"
            .to_string(),
    );
    Ok(())
}

fn provenance_text(p: &Value) -> Result<String> {
    match str_field(p, "kind")? {
        "degeneracy" => Ok("[degeneracy]".to_string()),
        "gap_match" => {
            let (hi, lo) = index_pair(p, "sys_pair")?;
            Ok(format!("[gap match, system pair ({hi}, {lo})]"))
        }
        other => Err(CliError::internal(format!(
            "unknown edge provenance \"{other}\""
        ))),
    }
}

fn render_inconsistency(cert: &Value, lines: &mut Vec<String>) -> Result<()> {
    lines.push("verdict: no consistent environment state".to_string());
    match str_field(cert, "kind")? {
        "cycle_mismatch" => {
            lines.push("  conflicting constraint cycle:".to_string());
            for edge in arr_field(cert, "cycle")? {
                lines.push(format!(
                    "    node {} -> node {}  offset {}  {}",
                    scalar_field(edge, "from")?,
                    scalar_field(edge, "to")?,
                    exact_field(edge, "offset")?,
                    provenance_text(field(edge, "provenance")?)?
                ));
            }
            lines.push(format!(
                "  net mismatch around the cycle: {}",
                exact_field(cert, "mismatch")?
            ));
        }
        "no_support" => {
            lines.push("  every environment level is forced to empty population:".to_string());
            for mark in arr_field(cert, "marks")? {
                lines.push(format!(
                    "    node {}: system level {} is empty while level {} is populated",
                    scalar_field(mark, "node")?,
                    scalar_field(mark, "sys_zero")?,
                    scalar_field(mark, "sys_finite")?
                ));
            }
            lines.push("  a state with no support cannot be normalized".to_string());
        }
        other => {
            return Err(CliError::internal(format!(
                "unknown inconsistency kind \"{other}\""
            )));
        }
    }
    Ok(())
}

fn summability_text(v: &Value) -> Result<String> {
    if v.is_null() {
        return Ok("not assessed (truncation below 3 levels per mode)".to_string());
    }
    match str_field(v, "verdict")? {
        "normalizable" => {
            if field(v, "truncation_only")?.as_bool() == Some(true) {
                Ok("normalizable within the truncation only — some direction carries \
                    no constraints"
                    .to_string())
            } else {
                Ok("normalizable — every forced direction decays".to_string())
            }
        }
        "divergent" => Ok(format!(
            "divergent along mode {} — forced per-step increment {} does not decay",
            scalar_field(v, "mode")?,
            exact_field(v, "rate")?
        )),
        "indeterminate" => {
            let incs: Vec<String> = arr_field(v, "increments")?.iter().map(exact).collect();
            Ok(format!(
                "indeterminate along mode {} — distinct forced increments: {}",
                scalar_field(v, "mode")?,
                incs.join(", ")
            ))
        }
        other => Err(CliError::internal(format!(
            "unknown summability verdict \"{other}\""
        ))),
    }
}

/// Longest component listing before the remainder is elided.
const MAX_COMPONENT_LINES: usize = 16;

fn render_assignment(cert: &Value, lines: &mut Vec<String>) -> Result<()> {
    lines.push("verdict: consistent environment state".to_string());
    let components = arr_field(cert, "components")?;
    lines.push(format!("  components: {}", components.len()));
    for c in components.iter().take(MAX_COMPONENT_LINES) {
        let members = arr_field(c, "members")?.len();
        let zero = field(c, "zero")?.as_bool() == Some(true);
        lines.push(format!(
            "    component anchored at node {}: {} member{}{}",
            scalar_field(c, "anchor")?,
            members,
            if members == 1 { "" } else { "s" },
            if zero { " (forced empty)" } else { "" }
        ));
    }
    if components.len() > MAX_COMPONENT_LINES {
        lines.push(format!(
            "    ... and {} more",
            components.len() - MAX_COMPONENT_LINES
        ));
    }
    lines.push(format!(
        "  summability: {}",
        summability_text(field(cert, "summability")?)?
    ));
    Ok(())
}

fn render_counterexample(cert: &Value, lines: &mut Vec<String>) -> Result<()> {
    lines.push("verdict: stable but non-Gibbs: fewer than three modes".to_string());
    let modes = field(cert, "modes")?.as_u64().ok_or_else(|| {
        CliError::internal("certificate field \"modes\" is not an integer".to_string())
    })?;
    lines.push(format!("  modes: {modes}"));
    match modes {
        1 => {
            lines.push(format!("  frequency: omega = {}", exact_field(cert, "omega")?));
            let matched = field(cert, "matched")?;
            if matched.is_null() {
                lines.push(
                    "  no system gap matches the frequency: free thermal ladder".to_string(),
                );
            } else {
                let (hi, lo) = index_pair(matched, "pair")?;
                lines.push(format!(
                    "  matched transition: levels ({hi}, {lo}) over {} ladder step{}",
                    scalar_field(matched, "steps")?,
                    if scalar_field(matched, "steps")? == "1" { "" } else { "s" }
                ));
            }
        }
        2 => {
            let omegas = arr_field(cert, "omega")?;
            if omegas.len() != 2 {
                return Err(CliError::internal(
                    "two-mode certificate does not carry two frequencies".to_string(),
                ));
            }
            lines.push(format!(
                "  frequencies: omega = ({}, {})",
                exact(&omegas[0]),
                exact(&omegas[1])
            ));
            let lattice = field(cert, "lattice")?;
            let fmt_vec = |v: &Value| -> Result<String> {
                let (a, b) = match v.as_array() {
                    Some(arr) if arr.len() == 2 => (scalar(&arr[0]), scalar(&arr[1])),
                    _ => {
                        return Err(CliError::internal(
                            "lattice vector is not an integer pair".to_string(),
                        ))
                    }
                };
                Ok(format!("({a}, {b})"))
            };
            lines.push(format!(
                "  lattice vectors: x = {}, y = {}, det = {}",
                fmt_vec(field(lattice, "x")?)?,
                fmt_vec(field(lattice, "y")?)?,
                scalar_field(lattice, "det")?
            ));
            lines.push(format!(
                "  cosets: {}",
                arr_field(lattice, "representatives")?.len()
            ));
            lines.push(format!(
                "  base decay rate: {}",
                scalar_field(cert, "base_decay")?
            ));
        }
        other => {
            return Err(CliError::internal(format!(
                "unsupported counterexample mode count {other}"
            )));
        }
    }
    let gibbs = field(cert, "system_gibbs")?;
    match str_field(gibbs, "verdict")? {
        "not_gibbs" => {
            let (n, m) = index_pair(gibbs, "witness")?;
            lines.push(format!("  system state: not thermal (witness pair ({n}, {m}))"));
        }
        "gibbs" => {
            lines.push(format!(
                "  system state: thermal at beta = {}",
                beta_text(field(gibbs, "beta")?)
            ));
        }
        other => {
            return Err(CliError::internal(format!(
                "unknown thermal-form verdict \"{other}\""
            )));
        }
    }
    let truncs: Vec<String> = arr_field(cert, "env_truncs")?.iter().map(scalar).collect();
    lines.push(format!("  environment truncation: [{}]", truncs.join(", ")));
    lines.push(format!(
        "  population decay rate: {}",
        scalar_field(cert, "decay_rate")?
    ));
    lines.push(format!(
        "  summability: {}",
        summability_text(field(cert, "summability")?)?
    ));
    Ok(())
}

fn render_forcing(cert: &Value, lines: &mut Vec<String>) -> Result<()> {
    let shared = format!(
        "  shared frequency: omega = {} with k = {}, ell = {}",
        exact_field(cert, "omega")?,
        scalar_field(cert, "k")?,
        scalar_field(cert, "ell")?
    );
    match str_field(cert, "verdict")? {
        "forced_equal" => {
            lines.push("verdict: commensurable gaps force equal temperatures".to_string());
            lines.push(shared);
            lines.push(format!(
                "  forced inverse temperature: beta = {}",
                beta_text(field(cert, "beta")?)
            ));
        }
        "contradiction" => {
            lines.push("verdict: exact temperature contradiction".to_string());
            lines.push(shared);
            lines.push(format!(
                "  ladder value via the wide gap: {}",
                exact_field(cert, "via_wide_gap")?
            ));
            lines.push(format!(
                "  ladder value via the narrow gap: {}",
                exact_field(cert, "via_narrow_gap")?
            ));
            lines.push(
                "  no single environment ladder satisfies both temperatures".to_string(),
            );
        }
        other => {
            return Err(CliError::internal(format!(
                "unknown forcing verdict \"{other}\""
            )));
        }
    }
    Ok(())
}

fn render_trace_class(cert: &Value, lines: &mut Vec<String>) -> Result<()> {
    let beta = scalar_field(cert, "beta")?;
    let beta0 = scalar_field(cert, "beta0")?;
    match str_field(cert, "verdict")? {
        "trace_class" => {
            lines.push(format!("verdict: trace class at beta = {beta}"));
            lines.push(
                "  the Gibbs weight sum converges; the thermal state exists".to_string(),
            );
        }
        "not_trace_class" => {
            lines.push(format!("verdict: not trace class at beta = {beta}"));
            lines.push(
                "  the Gibbs weight sum diverges; no thermal state at this temperature"
                    .to_string(),
            );
        }
        "inconclusive_numeric" => {
            lines.push(format!("verdict: inconclusive numeric probe at beta = {beta}"));
            lines.push(
                "  closed-form classification unavailable; the threshold below is a \
                 windowed estimate"
                    .to_string(),
            );
        }
        other => {
            return Err(CliError::internal(format!(
                "unknown trace-class verdict \"{other}\""
            )));
        }
    }
    lines.push(format!("  growth threshold: beta0 = {beta0}"));
    Ok(())
}

fn render_scan(cert: &Value, lines: &mut Vec<String>) -> Result<()> {
    let verdict = field(cert, "verdict")?;
    match str_field(verdict, "verdict")? {
        "decays_to_zero" => {
            let rate = field(verdict, "rate")?;
            if rate.is_null() {
                lines.push(
                    "verdict: deviations decay to zero (exact fixed point)".to_string(),
                );
            } else {
                lines.push(format!(
                    "verdict: deviations decay to zero (fitted exponent {})",
                    scalar(rate)
                ));
            }
        }
        "persistent" => {
            lines.push(format!(
                "verdict: deviations persist (floor {})",
                scalar_field(verdict, "floor")?
            ));
        }
        "inconclusive" => lines.push("verdict: scan inconclusive".to_string()),
        other => {
            return Err(CliError::internal(format!(
                "unknown scan verdict \"{other}\""
            )));
        }
    }
    let lambdas = arr_field(cert, "lambdas")?;
    let deviations = arr_field(cert, "deviations")?;
    let horizons = arr_field(cert, "time_horizons")?;
    if lambdas.len() != deviations.len() || lambdas.len() != horizons.len() {
        return Err(CliError::internal(
            "scan table columns have mismatched lengths".to_string(),
        ));
    }
    for ((l, d), h) in lambdas.iter().zip(deviations).zip(horizons) {
        lines.push(format!(
            "  lambda = {}: sup deviation {} over horizon {}",
            scalar(l),
            scalar(d),
            scalar(h)
        ));
    }
    Ok(())
}

fn render_analysis(cert: &Value, lines: &mut Vec<String>) -> Result<()> {
    lines.push("verdict: analysis".to_string());
    let passivity = field(cert, "passivity")?;
    match str_field(passivity, "verdict")? {
        "passive" => lines.push("  passivity: passive".to_string()),
        "violation" => {
            let (n, m) = index_pair(passivity, "witness")?;
            lines.push(format!("  passivity: violated (witness pair ({n}, {m}))"));
        }
        other => {
            return Err(CliError::internal(format!(
                "unknown passivity verdict \"{other}\""
            )));
        }
    }
    let profile = field(cert, "beta_profile")?;
    if profile.is_null() {
        lines.push("  beta profile: unavailable (empty ground level)".to_string());
    } else {
        let entries: Vec<String> = profile
            .as_array()
            .ok_or_else(|| {
                CliError::internal("certificate field \"beta_profile\" is not an array".to_string())
            })?
            .iter()
            .map(beta_text)
            .collect();
        lines.push(format!("  beta profile: {}", entries.join(", ")));
    }
    let gibbs = field(cert, "gibbs")?;
    match str_field(gibbs, "verdict")? {
        "gibbs" => lines.push(format!(
            "  thermal form: yes, beta = {}",
            beta_text(field(gibbs, "beta")?)
        )),
        "not_gibbs" => {
            let (n, m) = index_pair(gibbs, "witness")?;
            lines.push(format!("  thermal form: no (witness pair ({n}, {m}))"));
        }
        other => {
            return Err(CliError::internal(format!(
                "unknown thermal-form verdict \"{other}\""
            )));
        }
    }
    Ok(())
}

/// Renders certificate JSON to its fixed text report. Unknown certificate
/// types are internal failures (exit 3): the renderer and the analyses ship
/// together, so an unrecognized tag means the build is inconsistent.
pub fn render_report(cert: &Value) -> Result<String> {
    let tag = cert
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::internal("certificate carries no \"type\" tag"))?;
    let mut lines = Vec::new();
    match tag {
        "gibbs" => render_gibbs(cert, &mut lines)?,
        "instability" => render_instability(cert, &mut lines)?,
        "approximate_instability" => render_approximate_instability(cert, &mut lines)?,
        "structure_violation" => render_structure_violation(cert, &mut lines)?,
        "inconsistency" => render_inconsistency(cert, &mut lines)?,
        "env_assignment" => render_assignment(cert, &mut lines)?,
        "counterexample" => render_counterexample(cert, &mut lines)?,
        "forcing" => render_forcing(cert, &mut lines)?,
        "trace_class" => render_trace_class(cert, &mut lines)?,
        "stability_scan" => render_scan(cert, &mut lines)?,
        "analysis" => render_analysis(cert, &mut lines)?,
        other => {
            return Err(CliError::internal(format!(
                "unknown certificate type \"{other}\""
            )));
        }
    }
    let mut text = lines.join("\n");
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn gibbs_report_pins_its_exact_text() {
        let cert = json!({"type": "gibbs", "beta": "1"});
        assert_eq!(
            render_report(&cert).unwrap(),
            "verdict: thermal state\n  inverse temperature: beta = 1\n"
        );
    }

    #[test]
    fn zero_temperature_mentions_the_ground_state_projector() {
        let cert = json!({"type": "gibbs", "beta": "inf"});
        let text = render_report(&cert).unwrap();
        assert!(
            text.contains("zero temperature / ground-state projector"),
            "got: {text}"
        );
    }

    #[test]
    fn instability_report_carries_the_interpretation_line() {
        let cert = json!({
            "type": "instability",
            "pair": [2, 1],
            "p": 1,
            "q": 3,
            "omega1": ["2"],
            "omega2": ["1"],
            "omega3": ["1"],
            "log_s": "1",
            "beta_high": "2",
            "beta_low": "1",
            "witness": "joint weight grows along the witness direction",
        });
        let text = render_report(&cert).unwrap();
        assert!(
            text.contains(
                "second-order stability violated: coupling to the three-mode oscillator \
                 (ω₁, ω₂, ω₃) admits no normalizable environment state"
            ),
            "interpretation line missing: {text}"
        );
        assert!(text.contains("p = 1, q = 3"), "multipliers missing: {text}");
        assert!(
            text.contains("omega1 = 2, omega2 = 1, omega3 = 1"),
            "frequencies missing: {text}"
        );
        assert!(text.contains("log_s = 1"), "exponent missing: {text}");
    }

    #[test]
    fn counterexample_report_states_the_mode_deficit() {
        let cert = json!({
            "type": "counterexample",
            "modes": 1,
            "omega": ["1/3"],
            "matched": {"pair": [1, 0], "steps": 3},
            "system_gibbs": {"verdict": "not_gibbs", "witness": [2, 1]},
            "env_truncs": [9],
            "env_logg": ["0", "-1/3"],
            "summability": {"verdict": "normalizable", "truncation_only": true},
            "decay_rate": 0.25,
        });
        let text = render_report(&cert).unwrap();
        assert!(
            text.starts_with("verdict: stable but non-Gibbs: fewer than three modes\n"),
            "got: {text}"
        );
        assert!(
            text.contains("matched transition: levels (1, 0) over 3 ladder steps"),
            "got: {text}"
        );
        assert!(
            text.contains("normalizable within the truncation only"),
            "got: {text}"
        );
    }

    #[test]
    fn inconsistency_report_lists_the_cycle_with_offsets() {
        let cert = json!({
            "type": "inconsistency",
            "kind": "cycle_mismatch",
            "cycle": [
                {"from": 0, "to": 1, "offset": ["-1"],
                 "provenance": {"kind": "degeneracy"}},
                {"from": 1, "to": 2, "offset": ["-1"],
                 "provenance": {"kind": "gap_match", "sys_pair": [2, 0], "gap": ["2"]}},
                {"from": 0, "to": 2, "offset": ["-4"],
                 "provenance": {"kind": "degeneracy"}},
            ],
            "mismatch": ["2"],
        });
        let text = render_report(&cert).unwrap();
        assert!(
            text.contains("node 0 -> node 1  offset -1  [degeneracy]"),
            "got: {text}"
        );
        assert!(
            text.contains("node 1 -> node 2  offset -1  [gap match, system pair (2, 0)]"),
            "got: {text}"
        );
        assert!(
            text.contains("net mismatch around the cycle: 2"),
            "got: {text}"
        );
    }

    #[test]
    fn unknown_certificate_type_is_an_internal_failure() {
        let err = render_report(&json!({"type": "haiku"})).expect_err("unknown type");
        assert_eq!(err.code, crate::error::EXIT_INTERNAL);
        assert!(err.message.contains("haiku"), "got: {}", err.message);

        let err = render_report(&json!({"beta": "1"})).expect_err("missing tag");
        assert_eq!(err.code, crate::error::EXIT_INTERNAL);
    }

    #[test]
    fn rendering_is_a_pure_function_of_the_json() {
        let cert = json!({
            "type": "forcing",
            "verdict": "contradiction",
            "k": 2,
            "ell": 3,
            "omega": ["1/2"],
            "via_wide_gap": ["-6"],
            "via_narrow_gap": ["-3"],
        });
        let once = render_report(&cert).unwrap();
        let reparsed: Value =
            serde_json::from_str(&cert.to_string()).expect("certificate re-parses");
        assert_eq!(
            once,
            render_report(&reparsed).unwrap(),
            "re-parsed certificate must re-render to identical bytes"
        );
        assert!(once.contains("ladder value via the wide gap: -6"), "got: {once}");
    }
}
