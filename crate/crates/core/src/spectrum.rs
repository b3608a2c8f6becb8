//! Truncated point spectra with exact level energies.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::rat::Rat;

/// One spectral level: an exact energy and its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub energy: Exact,
    pub mult: u32,
}

/// Where a spectrum came from, when it was generated rather than listed.
/// Carried for reporting; no verdict depends on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Origin {
    Oscillator { omega: Exact, levels: usize },
    Multimode { freqs: Vec<Exact>, truncs: Vec<usize> },
}

/// A finite list of distinct levels, strictly increasing in numeric energy.
///
/// Construction merges exactly equal energies into multiplicities and sorts;
/// two levels that are exactly distinct but numerically indistinguishable
/// are rejected, because every downstream verdict would silently depend on
/// the tie-break.
#[derive(Debug, Clone)]
pub struct Spectrum {
    basis: Arc<Basis>,
    levels: Vec<Level>,
    origin: Option<Origin>,
}

impl Spectrum {
    pub fn new(basis: Arc<Basis>, raw: Vec<(Exact, u32)>) -> Result<Spectrum> {
        Spectrum::with_origin(basis, raw, None)
    }

    pub fn with_origin(
        basis: Arc<Basis>,
        raw: Vec<(Exact, u32)>,
        origin: Option<Origin>,
    ) -> Result<Spectrum> {
        if raw.is_empty() {
            return Err(Error::invalid("spectrum has no levels"));
        }
        let mut merged: Vec<Level> = Vec::with_capacity(raw.len());
        for (energy, mult) in raw {
            basis.admits(&energy)?;
            if mult == 0 {
                return Err(Error::invalid(format!(
                    "level {energy} declared with multiplicity 0"
                )));
            }
            match merged.iter_mut().find(|l| l.energy == energy) {
                Some(level) => level.mult += mult,
                None => merged.push(Level { energy, mult }),
            }
        }
        merged.sort_by(|a, b| a.energy.cmp_by(&b.energy, &basis));
        for pair in merged.windows(2) {
            if pair[0].energy.cmp_by(&pair[1].energy, &basis) != std::cmp::Ordering::Less {
                return Err(Error::invalid(format!(
                    "levels {} and {} are exactly distinct but numerically \
                     indistinguishable under the declared basis",
                    pair[0].energy, pair[1].energy
                )));
            }
        }
        Ok(Spectrum {
            basis,
            levels: merged,
            origin,
        })
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn origin(&self) -> Option<&Origin> {
        self.origin.as_ref()
    }

    pub fn energy(&self, n: usize) -> &Exact {
        &self.levels[n].energy
    }

    pub fn ground(&self) -> &Exact {
        &self.levels[0].energy
    }

    /// Gap above the ground level, `E_n - E_0`. Strictly positive for n > 0.
    pub fn gap(&self, n: usize) -> Exact {
        self.energy(n) - self.ground()
    }

    /// Total number of eigenvector slots (levels counted with multiplicity).
    pub fn slot_count(&self) -> usize {
        self.levels.iter().map(|l| l.mult as usize).sum()
    }

    /// The same spectrum shifted by a rational constant. Gap-based analyses
    /// are invariant under this; tests rely on it.
    pub fn shifted(&self, c: &Rat) -> Spectrum {
        let shift = Exact::rational(c.clone());
        let levels = self
            .levels
            .iter()
            .map(|l| Level {
                energy: &l.energy + &shift,
                mult: l.mult,
            })
            .collect();
        Spectrum {
            basis: self.basis.clone(),
            levels,
            origin: self.origin.clone(),
        }
    }

    /// The same spectrum with every energy scaled by a positive rational.
    pub fn scaled(&self, c: &Rat) -> Result<Spectrum> {
        if *c <= Rat::from_integer(0.into()) {
            return Err(Error::invalid("scale factor must be positive"));
        }
        let levels = self
            .levels
            .iter()
            .map(|l| Level {
                energy: l.energy.scale(c),
                mult: l.mult,
            })
            .collect();
        Ok(Spectrum {
            basis: self.basis.clone(),
            levels,
            origin: self.origin.clone(),
        })
    }
}
