//! Generator bases: the declared context that gives exact coordinate
//! vectors a numeric meaning.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::rat::rat_to_f64;

/// One declared generator. Generator 0 is always the rational unit and
/// carries no numeric value of its own; every further generator declares the
/// positive numeric value it evaluates to (for example `sqrt2` at 1.41421...).
/// Distinct generators are assumed rationally independent; that assumption
/// is the caller's modelling responsibility, not something the crate checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

/// Immutable set of generators shared by all values of one analysis context.
#[derive(Debug, Clone)]
pub struct Basis {
    generators: Vec<Generator>,
    values: Vec<f64>,
}

impl Basis {
    /// The bare rational basis: a single unit generator.
    pub fn rational() -> Arc<Basis> {
        Basis::new(vec![Generator {
            name: "unit".to_string(),
            value: None,
        }])
        .expect("unit basis is always valid")
        .into()
    }

    /// Convenience constructor: the unit plus one named irrational generator.
    pub fn with_generator(name: &str, value: f64) -> Result<Arc<Basis>> {
        Ok(Basis::new(vec![
            Generator {
                name: "unit".to_string(),
                value: None,
            },
            Generator {
                name: name.to_string(),
                value: Some(value),
            },
        ])?
        .into())
    }

    pub fn new(generators: Vec<Generator>) -> Result<Basis> {
        if generators.is_empty() {
            return Err(Error::invalid("basis declares no generators"));
        }
        match generators[0].value {
            None => {}
            Some(v) if v == 1.0 => {}
            Some(v) => {
                return Err(Error::invalid(format!(
                    "generator 0 is the rational unit and must have value 1, got {v}"
                )))
            }
        }
        let mut values = vec![1.0];
        for (i, g) in generators.iter().enumerate().skip(1) {
            let v = g.value.ok_or_else(|| {
                Error::invalid(format!("generator {} ({:?}) declares no value", i, g.name))
            })?;
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!(
                    "generator {:?} must have a finite positive value, got {v}",
                    g.name
                )));
            }
            values.push(v);
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::invalid(format!(
                    "duplicate generator name {:?}",
                    g.name
                )));
            }
        }
        Ok(Basis { generators, values })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Numeric value of an exact coordinate vector.
    ///
    /// Panics when the vector uses more coordinates than the basis declares;
    /// construction-time validation of spectra and states makes that a
    /// programming error rather than an input error.
    pub fn eval(&self, x: &Exact) -> f64 {
        assert!(
            x.width() <= self.values.len(),
            "value uses {} coordinates but the basis declares {} generators",
            x.width(),
            self.values.len()
        );
        x.coords()
            .iter()
            .zip(&self.values)
            .map(|(c, v)| rat_to_f64(c) * v)
            .sum()
    }

    /// Validation hook used by constructors of basis-scoped containers.
    pub fn admits(&self, x: &Exact) -> Result<()> {
        if x.width() > self.values.len() {
            return Err(Error::invalid(format!(
                "value {x} uses {} coordinates but the basis declares {} generators",
                x.width(),
                self.values.len()
            )));
        }
        Ok(())
    }
}
