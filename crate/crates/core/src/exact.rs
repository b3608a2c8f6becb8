//! Exact scalars over a generator basis.
//!
//! Every energy and log-population in the crate is an element of the rational
//! span of a declared generator set: coordinate vectors of [`Rat`] with
//! coordinate 0 attached to the rational unit and the remaining coordinates
//! to declared (numerically valued, assumed rationally independent)
//! generators such as `sqrt2`. Equality, addition, subtraction, rational
//! scaling, and parallelism tests are exact; only order comparisons between
//! values that differ in a non-unit coordinate fall back to numeric
//! evaluation against the basis.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::basis::Basis;
use crate::rat::{format_rat, parse_rat, Rat};

/// Exact rational linear combination of the declared generators.
///
/// The coordinate vector is kept in canonical form with trailing zeros
/// trimmed, so structural equality and hashing coincide with mathematical
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Exact {
    coords: Vec<Rat>,
}

impl Exact {
    pub fn zero() -> Self {
        Exact { coords: Vec::new() }
    }

    /// Value `r` in the unit coordinate.
    pub fn rational(r: Rat) -> Self {
        Exact::from_coords(vec![r])
    }

    pub fn integer(n: i64) -> Self {
        Exact::rational(Rat::from_integer(n.into()))
    }

    /// One unit of generator `index` (0 is the rational unit).
    pub fn generator(index: usize) -> Self {
        let mut coords = vec![Rat::zero(); index + 1];
        coords[index] = Rat::from_integer(1.into());
        Exact::from_coords(coords)
    }

    pub fn from_coords(mut coords: Vec<Rat>) -> Self {
        while coords.last().map_or(false, |c| c.is_zero()) {
            coords.pop();
        }
        Exact { coords }
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// Coordinate `i`, zero beyond the stored length.
    pub fn coord(&self, i: usize) -> Rat {
        self.coords.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    /// Index one past the last nonzero coordinate.
    pub fn width(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// `Some(r)` when the value is `r` times the rational unit.
    pub fn as_rational(&self) -> Option<Rat> {
        match self.coords.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.coords[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, factor: &Rat) -> Exact {
        if factor.is_zero() {
            return Exact::zero();
        }
        Exact::from_coords(self.coords.iter().map(|c| c * factor).collect())
    }

    /// Exact ratio `self / other` when the two vectors are parallel.
    /// Returns `None` when `other` is zero or the vectors are not parallel,
    /// i.e. when the quotient falls outside the rational field.
    pub fn ratio_to(&self, other: &Exact) -> Option<Rat> {
        let pivot = other.coords.iter().position(|c| !c.is_zero())?;
        let r = &self.coord(pivot) / &other.coords[pivot];
        if *self == other.scale(&r) {
            Some(r)
        } else {
            None
        }
    }

    /// Numeric value against a basis. The basis must declare at least
    /// `self.width()` generators; spectra and states are validated against
    /// their basis at construction, so a violation here is a programming
    /// error.
    pub fn eval(&self, basis: &Basis) -> f64 {
        basis.eval(self)
    }

    /// Sign of the value: exact when the vector is rational, numeric against
    /// the basis otherwise.
    pub fn sign(&self, basis: &Basis) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(r) = self.as_rational() {
            return r.cmp(&Rat::zero());
        }
        let v = self.eval(basis);
        if v < 0.0 {
            Ordering::Less
        } else if v > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    /// Order relative to `other`: exact where the difference is rational.
    pub fn cmp_by(&self, other: &Exact, basis: &Basis) -> std::cmp::Ordering {
        (self - other).sign(basis)
    }
}

impl Add for &Exact {
    type Output = Exact;
    fn add(self, rhs: &Exact) -> Exact {
        let n = self.coords.len().max(rhs.coords.len());
        let coords = (0..n).map(|i| self.coord(i) + rhs.coord(i)).collect();
        Exact::from_coords(coords)
    }
}

impl Sub for &Exact {
    type Output = Exact;
    fn sub(self, rhs: &Exact) -> Exact {
        let n = self.coords.len().max(rhs.coords.len());
        let coords = (0..n).map(|i| self.coord(i) - rhs.coord(i)).collect();
        Exact::from_coords(coords)
    }
}

impl Neg for &Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact::from_coords(self.coords.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rat(&r));
        }
        let parts: Vec<String> = self.coords.iter().map(format_rat).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<String> = if self.coords.is_empty() {
            vec!["0".to_string()]
        } else {
            self.coords.iter().map(format_rat).collect()
        };
        parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(deserializer)?;
        let coords = parts
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| D::Error::custom(e.to_string()))?;
        Ok(Exact::from_coords(coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn arithmetic_keeps_canonical_form() {
        let a = Exact::from_coords(vec![rat(1, 2), rat(3, 1)]);
        let b = Exact::from_coords(vec![rat(1, 2), rat(3, 1)]);
        assert_eq!(&a - &b, Exact::zero());
        assert!((&a - &b).is_zero());
        let c = &a + &Exact::rational(rat(1, 2));
        assert_eq!(c.coord(0), rat(1, 1));
        assert_eq!(c.coord(1), rat(3, 1));
    }

    #[test]
    fn parallel_vectors_have_exact_ratios() {
        let gap = Exact::from_coords(vec![rat(1, 1), rat(1, 1)]); // 1 + g
        let diff = gap.scale(&rat(-2, 1));
        assert_eq!(diff.ratio_to(&gap), Some(rat(-2, 1)));
        let skew = Exact::from_coords(vec![rat(1, 1), rat(2, 1)]);
        assert_eq!(skew.ratio_to(&gap), None);
        assert_eq!(Exact::zero().ratio_to(&gap), Some(rat(0, 1)));
        assert_eq!(gap.ratio_to(&Exact::zero()), None);
    }

    #[test]
    fn rational_detection_ignores_trailing_zeros() {
        let a = Exact::from_coords(vec![rat(5, 3), rat(0, 1)]);
        assert_eq!(a.as_rational(), Some(rat(5, 3)));
        assert_eq!(a.width(), 1);
    }

    #[test]
    fn serde_round_trips_coordinates() {
        let a = Exact::from_coords(vec![rat(0, 1), rat(-7, 2)]);
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(j, r#"["0","-7/2"]"#);
        let back: Exact = serde_json::from_str(&j).unwrap();
        assert_eq!(back, a);
    }
}
