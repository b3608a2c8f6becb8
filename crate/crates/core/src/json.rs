//! JSON schemas for spectra, states, and dense complex matrices.
//!
//! All rationals travel as `"num/den"` strings (plain `"num"` when
//! integral) so nothing is lost in transport. The accepted shapes:
//!
//! * Spectrum: `{"generators": [{"name": "unit"}, {"name": "sqrt2",
//!   "value": 1.41421356}], "levels": [{"coords": ["0", "1"], "mult": 1}]}`.
//!   A level's energy is its rational coordinate vector over the declared
//!   generators; a bare string is accepted as shorthand for a purely
//!   rational energy, and `mult` defaults to 1.
//! * State: `{"logp": ["0", "-1", "-4"]}` — one entry per level: a
//!   rational string, a coordinate array for values with irrational parts,
//!   or `"-inf"` for zero population.
//! * Matrix: dense array of rows whose entries are `[re, im]` pairs; bare
//!   numbers are accepted as real entries.
//!
//! Every parse error names the offending field by its JSON path.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::basis::{Basis, Generator};
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::rat::{format_rat, parse_rat};
use crate::spectrum::Spectrum;
use crate::state::{LogState, LogValue};

fn bad(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::invalid(format!("{path}: {msg}"))
}

fn as_object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| bad(path, "expected an object"))
}

fn as_array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn reject_unknown_keys(map: &Map<String, Value>, known: &[&str], path: &str) -> Result<()> {
    for key in map.keys() {
        if !known.contains(&key.as_str()) {
            return Err(bad(&format!("{path}.{key}"), "unknown field"));
        }
    }
    Ok(())
}

/// Parses an exact scalar: a rational string, or an array of rational
/// coordinate strings over the basis generators.
pub fn parse_exact(v: &Value, path: &str) -> Result<Exact> {
    match v {
        Value::String(s) => Ok(Exact::rational(
            parse_rat(s).map_err(|e| bad(path, e))?,
        )),
        Value::Array(parts) => {
            let mut coords = Vec::with_capacity(parts.len());
            for (i, part) in parts.iter().enumerate() {
                let item = format!("{path}[{i}]");
                let s = part
                    .as_str()
                    .ok_or_else(|| bad(&item, "expected a rational string"))?;
                coords.push(parse_rat(s).map_err(|e| bad(&item, e))?);
            }
            Ok(Exact::from_coords(coords))
        }
        _ => Err(bad(
            path,
            "expected a rational string or an array of coordinate strings",
        )),
    }
}

/// Emits an exact scalar in the shape [`parse_exact`] reads back: a plain
/// rational string where possible, a coordinate array otherwise.
pub fn exact_to_value(x: &Exact) -> Value {
    match x.as_rational() {
        Some(r) => Value::String(format_rat(&r)),
        None => Value::Array(
            x.coords()
                .iter()
                .map(|c| Value::String(format_rat(c)))
                .collect(),
        ),
    }
}

/// Parses one log-population entry: `"-inf"` for zero population, anything
/// else as an exact scalar.
pub fn parse_logvalue(v: &Value, path: &str) -> Result<LogValue> {
    if v.as_str() == Some("-inf") {
        return Ok(LogValue::NegInfinity);
    }
    Ok(LogValue::Finite(parse_exact(v, path)?))
}

/// Emits one log-population entry in the shape [`parse_logvalue`] reads.
pub fn logvalue_to_value(v: &LogValue) -> Value {
    match v {
        LogValue::Finite(x) => exact_to_value(x),
        LogValue::NegInfinity => Value::String("-inf".to_string()),
    }
}

fn parse_generator(v: &Value, path: &str) -> Result<Generator> {
    let map = as_object(v, path)?;
    reject_unknown_keys(map, &["name", "value"], path)?;
    let name = map
        .get("name")
        .and_then(Value::as_str)
        .ok_or_else(|| bad(&format!("{path}.name"), "expected a string"))?
        .to_string();
    let value = match map.get("value") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_f64()
                .ok_or_else(|| bad(&format!("{path}.value"), "expected a number"))?,
        ),
    };
    Ok(Generator { name, value })
}

/// Parses a spectrum document already loaded as a JSON value.
pub fn parse_spectrum_value(v: &Value) -> Result<Spectrum> {
    let map = as_object(v, "spectrum")?;
    reject_unknown_keys(map, &["generators", "levels"], "spectrum")?;
    let gens_value = map
        .get("generators")
        .ok_or_else(|| bad("spectrum.generators", "missing field"))?;
    let gens = as_array(gens_value, "spectrum.generators")?
        .iter()
        .enumerate()
        .map(|(i, g)| parse_generator(g, &format!("spectrum.generators[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let basis = Arc::new(Basis::new(gens)?);

    let levels_value = map
        .get("levels")
        .ok_or_else(|| bad("spectrum.levels", "missing field"))?;
    let mut raw = Vec::new();
    for (i, level) in as_array(levels_value, "spectrum.levels")?.iter().enumerate() {
        let path = format!("spectrum.levels[{i}]");
        let level_map = as_object(level, &path)?;
        reject_unknown_keys(level_map, &["coords", "mult"], &path)?;
        let coords_value = level_map
            .get("coords")
            .ok_or_else(|| bad(&format!("{path}.coords"), "missing field"))?;
        let energy = parse_exact(coords_value, &format!("{path}.coords"))?;
        let mult = match level_map.get("mult") {
            None => 1,
            Some(m) => u32::try_from(
                m.as_u64()
                    .ok_or_else(|| bad(&format!("{path}.mult"), "expected a positive integer"))?,
            )
            .map_err(|_| bad(&format!("{path}.mult"), "multiplicity too large"))?,
        };
        raw.push((energy, mult));
    }
    Spectrum::new(basis, raw)
}

/// Parses a spectrum document from JSON text.
pub fn parse_spectrum(text: &str) -> Result<Spectrum> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed JSON: {e}")))?;
    parse_spectrum_value(&v)
}

/// Emits a spectrum in the shape [`parse_spectrum`] reads back. Levels come
/// out in the spectrum's canonical (energy-sorted, merged) order.
pub fn spectrum_to_value(spec: &Spectrum) -> Value {
    let generators: Vec<Value> = spec
        .basis()
        .generators()
        .iter()
        .map(|g| match g.value {
            Some(v) => json!({"name": g.name, "value": v}),
            None => json!({"name": g.name}),
        })
        .collect();
    let levels: Vec<Value> = spec
        .levels()
        .iter()
        .map(|l| {
            json!({
                "coords": coords_array(&l.energy),
                "mult": l.mult,
            })
        })
        .collect();
    json!({"generators": generators, "levels": levels})
}

/// Coordinate-array form (never the string shorthand), so level energies
/// always show their full generator expansion.
fn coords_array(x: &Exact) -> Value {
    serde_json::to_value(x).expect("coordinate strings always serialize")
}

/// Parses a state document already loaded as a JSON value.
pub fn parse_state_value(v: &Value) -> Result<LogState> {
    let map = as_object(v, "state")?;
    reject_unknown_keys(map, &["logp"], "state")?;
    let logp_value = map
        .get("logp")
        .ok_or_else(|| bad("state.logp", "missing field"))?;
    let entries = as_array(logp_value, "state.logp")?
        .iter()
        .enumerate()
        .map(|(i, e)| parse_logvalue(e, &format!("state.logp[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    if entries.is_empty() {
        return Err(bad("state.logp", "state lists no levels"));
    }
    Ok(LogState::new(entries))
}

/// Parses a state document from JSON text.
pub fn parse_state(text: &str) -> Result<LogState> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed JSON: {e}")))?;
    parse_state_value(&v)
}

/// Emits a state in the shape [`parse_state`] reads back.
pub fn state_to_value(state: &LogState) -> Value {
    json!({
        "logp": state
            .entries()
            .iter()
            .map(logvalue_to_value)
            .collect::<Vec<_>>()
    })
}

/// Parses a dense complex matrix: an array of equal-length rows whose
/// entries are `[re, im]` pairs or bare real numbers.
pub fn parse_matrix_value(v: &Value, path: &str) -> Result<Vec<Vec<(f64, f64)>>> {
    let rows = as_array(v, path)?;
    if rows.is_empty() {
        return Err(bad(path, "matrix has no rows"));
    }
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let cells = as_array(row, &row_path)?;
        let mut parsed = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            let cell_path = format!("{row_path}[{j}]");
            parsed.push(parse_complex(cell, &cell_path)?);
        }
        out.push(parsed);
    }
    let width = out[0].len();
    if let Some(i) = out.iter().position(|row| row.len() != width) {
        return Err(bad(
            &format!("{path}[{i}]"),
            format!("row has {} entries, expected {width}", out[i].len()),
        ));
    }
    Ok(out)
}

fn parse_complex(v: &Value, path: &str) -> Result<(f64, f64)> {
    match v {
        Value::Number(n) => Ok((
            n.as_f64()
                .ok_or_else(|| bad(path, "expected a finite number"))?,
            0.0,
        )),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| bad(&format!("{path}[0]"), "expected a number"))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| bad(&format!("{path}[1]"), "expected a number"))?;
            Ok((re, im))
        }
        _ => Err(bad(path, "expected a number or an [re, im] pair")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn parses_two_generator_spectrum_document() {
        let text = r#"{
            "generators": [{"name": "unit"}, {"name": "sqrt2", "value": 1.4142135623730951}],
            "levels": [
                {"coords": ["0"], "mult": 1},
                {"coords": ["0", "1"], "mult": 2},
                {"coords": ["3", "-1"]}
            ]
        }"#;
        let spec = parse_spectrum(text).unwrap();
        assert_eq!(spec.len(), 3);
        assert_eq!(spec.basis().len(), 2);
        assert_eq!(spec.energy(0), &Exact::zero());
        assert_eq!(
            spec.energy(1),
            &Exact::from_coords(vec![rat(0, 1), rat(1, 1)]),
            "levels sort numerically: sqrt2 < 3 - sqrt2"
        );
        assert_eq!(spec.levels()[1].mult, 2);
        assert_eq!(spec.levels()[2].mult, 1, "mult defaults to 1");
    }

    #[test]
    fn spectrum_round_trips_through_its_own_emission() {
        let text = r#"{
            "generators": [{"name": "unit"}, {"name": "sqrt2", "value": 1.4142135623730951}],
            "levels": [{"coords": ["0"]}, {"coords": ["3", "-1"]}, {"coords": ["1", "1"]}]
        }"#;
        let spec = parse_spectrum(text).unwrap();
        let emitted = spectrum_to_value(&spec);
        let back = parse_spectrum_value(&emitted).unwrap();
        assert_eq!(back.levels(), spec.levels());
        assert_eq!(
            serde_json::to_string(&spectrum_to_value(&back)).unwrap(),
            serde_json::to_string(&emitted).unwrap(),
            "emission is a fixed point"
        );
    }

    #[test]
    fn spectrum_errors_name_the_offending_field() {
        let bad_coord = r#"{
            "generators": [{"name": "unit"}],
            "levels": [{"coords": ["0"]}, {"coords": ["1/x"]}]
        }"#;
        let err = parse_spectrum(bad_coord).unwrap_err().to_string();
        assert!(
            err.contains("spectrum.levels[1].coords[0]"),
            "error should point into the document, got: {err}"
        );

        let unknown_key = r#"{
            "generators": [{"name": "unit"}],
            "levels": [{"coords": ["0"], "mul": 2}]
        }"#;
        let err = parse_spectrum(unknown_key).unwrap_err().to_string();
        assert!(
            err.contains("spectrum.levels[0].mul") && err.contains("unknown field"),
            "misspelled keys should be caught, got: {err}"
        );
    }

    #[test]
    fn state_round_trips_all_entry_shapes() {
        let text = r#"{"logp": ["0", "-1/2", ["0", "-1"], "-inf"]}"#;
        let state = parse_state(text).unwrap();
        assert_eq!(state.len(), 4);
        assert_eq!(state.value(0), &LogValue::integer(0));
        assert_eq!(state.value(1), &LogValue::rational(rat(-1, 2)));
        assert_eq!(
            state.value(2),
            &LogValue::Finite(Exact::from_coords(vec![rat(0, 1), rat(-1, 1)]))
        );
        assert_eq!(state.value(3), &LogValue::NegInfinity);

        let emitted = state_to_value(&state);
        assert_eq!(
            emitted,
            serde_json::json!({"logp": ["0", "-1/2", ["0", "-1"], "-inf"]})
        );
        assert_eq!(parse_state_value(&emitted).unwrap(), state);
    }

    #[test]
    fn state_errors_name_the_offending_entry() {
        let err = parse_state(r#"{"logp": ["0", "oops"]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("state.logp[1]"), "got: {err}");
        assert!(parse_state(r#"{"logp": []}"#).is_err());
        assert!(parse_state(r#"{"logq": ["0"]}"#).is_err());
    }

    #[test]
    fn matrix_accepts_pairs_and_bare_reals() {
        let v = serde_json::json!([[0.0, [0.5, -0.5]], [[0.5, 0.5], 1.0]]);
        let m = parse_matrix_value(&v, "matrix").unwrap();
        assert_eq!(m[0][1], (0.5, -0.5));
        assert_eq!(m[1][1], (1.0, 0.0));
    }

    #[test]
    fn matrix_rejects_ragged_rows() {
        let v = serde_json::json!([[1.0, 2.0], [3.0]]);
        let err = parse_matrix_value(&v, "matrix").unwrap_err().to_string();
        assert!(err.contains("matrix[1]"), "got: {err}");
    }
}
