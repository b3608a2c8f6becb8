//! Loading and parsing of scenario inputs beyond spectra and states:
//! growth families, environment descriptions, matrix documents, and the
//! comma-separated flag values.
//!
//! Every parse error points at the offending file, field, or flag so the
//! one-line stderr cause is actionable.

use std::path::Path;

use serde_json::Value;

use gibbsgate_core::counterexample::IntVec2;
use gibbsgate_core::growth::GrowthFamily;
use gibbsgate_core::json::{parse_exact, parse_matrix_value, parse_spectrum, parse_state};
use gibbsgate_core::rat::parse_rat;
use gibbsgate_core::{Exact, LogState, Rat, Spectrum};
use gibbsgate_dynamics::{C64, CMatrix};

use crate::error::{CliError, Result};

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))
}

pub fn load_spectrum(path: &Path) -> Result<Spectrum> {
    let text = read_file(path)?;
    parse_spectrum(&text)
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

pub fn load_state(path: &Path) -> Result<LogState> {
    let text = read_file(path)?;
    parse_state(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn parse_document(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| CliError::invalid(format!("{what}: malformed JSON: {e}")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| CliError::invalid(format!("{path}: expected a JSON object")))
}

fn reject_unknown_keys(
    obj: &serde_json::Map<String, Value>,
    allowed: &[&str],
    path: &str,
) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(CliError::invalid(format!(
                "{path}.{key}: unknown field (allowed: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn field_rat(obj: &serde_json::Map<String, Value>, key: &str, path: &str) -> Result<Rat> {
    let v = obj
        .get(key)
        .ok_or_else(|| CliError::invalid(format!("{path}.{key}: missing field")))?;
    let s = v
        .as_str()
        .ok_or_else(|| CliError::invalid(format!("{path}.{key}: expected a rational string")))?;
    parse_rat(s).map_err(|e| CliError::invalid(format!("{path}.{key}: {e}")))
}

/// Growth family document:
/// `{"family": "linear", "slope": "1", "intercept": "0"}`,
/// `{"family": "logarithmic", "scale": "1"}`,
/// `{"family": "bounded", "bound": "7"}`, or
/// `{"family": "explicit", "levels": ["0", "1", "5/2"]}`.
pub fn parse_family(text: &str) -> Result<GrowthFamily> {
    let v = parse_document(text, "family")?;
    let obj = as_object(&v, "family")?;
    let kind = obj
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::invalid("family.family: missing or non-string field"))?;
    let family = match kind {
        "linear" => {
            reject_unknown_keys(obj, &["family", "slope", "intercept"], "family")?;
            GrowthFamily::linear(
                field_rat(obj, "slope", "family")?,
                field_rat(obj, "intercept", "family")?,
            )?
        }
        "logarithmic" => {
            reject_unknown_keys(obj, &["family", "scale"], "family")?;
            GrowthFamily::logarithmic(field_rat(obj, "scale", "family")?)?
        }
        "bounded" => {
            reject_unknown_keys(obj, &["family", "bound"], "family")?;
            GrowthFamily::bounded(field_rat(obj, "bound", "family")?)
        }
        "explicit" => {
            reject_unknown_keys(obj, &["family", "levels"], "family")?;
            let levels = obj
                .get("levels")
                .and_then(Value::as_array)
                .ok_or_else(|| CliError::invalid("family.levels: expected an array"))?;
            let mut out = Vec::with_capacity(levels.len());
            for (i, l) in levels.iter().enumerate() {
                let s = l.as_str().ok_or_else(|| {
                    CliError::invalid(format!("family.levels[{i}]: expected a rational string"))
                })?;
                out.push(
                    parse_rat(s)
                        .map_err(|e| CliError::invalid(format!("family.levels[{i}]: {e}")))?,
                );
            }
            GrowthFamily::explicit(out)?
        }
        other => {
            return Err(CliError::invalid(format!(
                "family.family: unknown kind \"{other}\" \
                 (expected linear, logarithmic, bounded, or explicit)"
            )));
        }
    };
    Ok(family)
}

/// Oscillator environment description: mode frequencies in the system's
/// generator coordinates, with optional truncations.
#[derive(Debug)]
pub struct EnvDescription {
    pub freqs: Vec<Exact>,
    pub truncs: Option<Vec<usize>>,
}

/// Parses `{"freqs": [...], "truncs": [...]}`; `truncs` may be omitted when
/// the `--trunc` flag supplies it.
pub fn parse_env(text: &str) -> Result<EnvDescription> {
    let v = parse_document(text, "env")?;
    let obj = as_object(&v, "env")?;
    reject_unknown_keys(obj, &["freqs", "truncs"], "env")?;
    let raw = obj
        .get("freqs")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::invalid("env.freqs: missing or non-array field"))?;
    let mut freqs = Vec::with_capacity(raw.len());
    for (i, f) in raw.iter().enumerate() {
        freqs.push(
            parse_exact(f, &format!("env.freqs[{i}]"))
                .map_err(|e| CliError::invalid(e.to_string()))?,
        );
    }
    let truncs = match obj.get("truncs") {
        None | Some(Value::Null) => None,
        Some(v) => Some(parse_trunc_array(v, "env.truncs")?),
    };
    Ok(EnvDescription { freqs, truncs })
}

fn parse_trunc_array(v: &Value, path: &str) -> Result<Vec<usize>> {
    let arr = v
        .as_array()
        .ok_or_else(|| CliError::invalid(format!("{path}: expected an array")))?;
    let mut out = Vec::with_capacity(arr.len());
    for (i, t) in arr.iter().enumerate() {
        let n = t
            .as_u64()
            .and_then(|n| usize::try_from(n).ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| {
                CliError::invalid(format!("{path}[{i}]: expected a positive integer"))
            })?;
        out.push(n);
    }
    Ok(out)
}

/// Environment description for a counterexample construction.
#[derive(Debug)]
pub enum CounterexampleEnv {
    One {
        omega: Exact,
    },
    Two {
        omega: (Exact, Exact),
        base_decay: Rat,
        lattice: Option<(IntVec2, IntVec2)>,
    },
}

fn parse_intvec(v: &Value, path: &str) -> Result<IntVec2> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| CliError::invalid(format!("{path}: expected a pair of integers")))?;
    let mut out = [0i64; 2];
    for (i, e) in arr.iter().enumerate() {
        out[i] = e
            .as_i64()
            .ok_or_else(|| CliError::invalid(format!("{path}[{i}]: expected an integer")))?;
    }
    Ok(out)
}

/// Parses a one-mode `{"omega": <exact>}` or two-mode
/// `{"omega": [<exact>, <exact>], "base_decay": "1", "lattice": {"x": [3,-1],
/// "y": [1,1]}}` description, with `lattice` optional.
pub fn parse_counterexample_env(text: &str, two_modes: bool) -> Result<CounterexampleEnv> {
    let v = parse_document(text, "env")?;
    let obj = as_object(&v, "env")?;
    if !two_modes {
        reject_unknown_keys(obj, &["omega"], "env")?;
        let omega = obj
            .get("omega")
            .ok_or_else(|| CliError::invalid("env.omega: missing field"))?;
        let omega =
            parse_exact(omega, "env.omega").map_err(|e| CliError::invalid(e.to_string()))?;
        return Ok(CounterexampleEnv::One { omega });
    }
    reject_unknown_keys(obj, &["omega", "base_decay", "lattice"], "env")?;
    let raw = obj
        .get("omega")
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| {
            CliError::invalid("env.omega: expected an array of two mode frequencies")
        })?;
    let omega = (
        parse_exact(&raw[0], "env.omega[0]").map_err(|e| CliError::invalid(e.to_string()))?,
        parse_exact(&raw[1], "env.omega[1]").map_err(|e| CliError::invalid(e.to_string()))?,
    );
    let base_decay = field_rat(obj, "base_decay", "env")?;
    let lattice = match obj.get("lattice") {
        None | Some(Value::Null) => None,
        Some(l) => {
            let lobj = as_object(l, "env.lattice")?;
            reject_unknown_keys(lobj, &["x", "y"], "env.lattice")?;
            let x = lobj
                .get("x")
                .ok_or_else(|| CliError::invalid("env.lattice.x: missing field"))?;
            let y = lobj
                .get("y")
                .ok_or_else(|| CliError::invalid("env.lattice.y: missing field"))?;
            Some((
                parse_intvec(x, "env.lattice.x")?,
                parse_intvec(y, "env.lattice.y")?,
            ))
        }
    };
    Ok(CounterexampleEnv::Two {
        omega,
        base_decay,
        lattice,
    })
}

/// Loads `{"matrix": [[...]]}` into a dense complex matrix. Entries are
/// bare reals or `[re, im]` pairs; rows must be square.
pub fn load_matrix(path: &Path) -> Result<CMatrix> {
    let text = read_file(path)?;
    let v = parse_document(&text, "matrix")?;
    let obj = as_object(&v, "matrix")?;
    reject_unknown_keys(obj, &["matrix"], "matrix")?;
    let node = obj
        .get("matrix")
        .ok_or_else(|| CliError::invalid("matrix.matrix: missing field"))?;
    let rows = parse_matrix_value(node, "matrix.matrix")
        .map_err(|e| CliError::invalid(e.to_string()))?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(CliError::invalid(format!(
            "matrix.matrix: expected a square matrix, got {n} rows of width {}",
            rows[0].len()
        )));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        C64::new(rows[i][j].0, rows[i][j].1)
    }))
}

/// Parses "N" or "N,M,K" into positive truncation levels.
pub fn parse_usize_list(s: &str, flag: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| {
                    CliError::invalid(format!(
                        "{flag}: \"{part}\" is not a positive integer"
                    ))
                })
        })
        .collect()
}

/// Parses "m,n" into a level pair.
pub fn parse_pair(s: &str, flag: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::invalid(format!(
            "{flag}: expected \"m,n\", got \"{s}\""
        )));
    }
    let parse = |part: &str| {
        part.trim()
            .parse::<usize>()
            .map_err(|_| CliError::invalid(format!("{flag}: \"{part}\" is not a level index")))
    };
    Ok((parse(parts[0])?, parse(parts[1])?))
}

/// Parses a strictly decreasing positive coupling list "0.2,0.1,...".
pub fn parse_lambdas(s: &str, flag: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|part| {
            part.trim().parse::<f64>().map_err(|_| {
                CliError::invalid(format!("{flag}: \"{part}\" is not a number"))
            })
        })
        .collect()
}
