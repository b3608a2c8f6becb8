//! Exact rational scalars and the rational searches the analyses rely on.

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number. All exact arithmetic in the crate
/// bottoms out in this type.
pub type Rat = num::BigRational;

/// Shorthand constructor for small rationals, mostly used in tests.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"n"` or `"n/d"` with optional signs. Rejects zero denominators.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = n
        .parse()
        .map_err(|_| Error::invalid(format!("malformed rational {s:?}: bad numerator")))?;
    let denom: BigInt = d
        .parse()
        .map_err(|_| Error::invalid(format!("malformed rational {s:?}: bad denominator")))?;
    if denom.is_zero() {
        return Err(Error::invalid(format!(
            "malformed rational {s:?}: zero denominator"
        )));
    }
    Ok(Rat::new(numer, denom))
}

/// Formats a rational as `"n"` when integral, `"n/d"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Numeric value of a rational. Exactness is irrelevant to callers of this;
/// it is the point where derived quantities become displayable numbers.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation of `x` within absolute tolerance `tol`,
/// by continued-fraction convergents. The returned value is the convergent
/// with the smallest denominator that lands inside the tolerance.
pub fn rational_approx(x: f64, tol: f64) -> Result<Rat> {
    if !x.is_finite() || !(tol > 0.0) {
        return Err(Error::invalid(format!(
            "cannot approximate {x} at tolerance {tol}"
        )));
    }
    if x.abs() <= tol {
        return Ok(Rat::zero());
    }
    let negative = x < 0.0;
    let target = x.abs();
    // Convergent recurrence h_k = a_k h_{k-1} + h_{k-2}, same for k.
    let (mut h0, mut k0) = (BigInt::one(), BigInt::zero());
    let (mut h1, mut k1) = (BigInt::from(target.floor() as i128), BigInt::one());
    let mut rem = target - target.floor();
    for _ in 0..64 {
        let approx = Rat::new(h1.clone(), k1.clone());
        if (rat_to_f64(&approx) - target).abs() <= tol {
            return Ok(if negative { -approx } else { approx });
        }
        if rem.abs() < f64::EPSILON {
            break;
        }
        let y = 1.0 / rem;
        let a = y.floor();
        rem = y - a;
        let a = BigInt::from(a as i128);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        h0 = h1;
        k0 = k1;
        h1 = h2;
        k1 = k2;
    }
    let approx = Rat::new(h1, k1);
    if (rat_to_f64(&approx) - target).abs() <= tol {
        Ok(if negative { -approx } else { approx })
    } else {
        Err(Error::invalid(format!(
            "no rational approximation of {x} within {tol}"
        )))
    }
}

/// The rational in the open interval `(lo, hi)` with the smallest
/// denominator, ties broken by the smallest numerator. This is the first
/// fraction the Stern-Brocot tree search meets when descending into the
/// interval; the recursion below is that descent with floor-sized jumps.
///
/// Both endpoints must be nonnegative with `lo < hi`.
pub fn simplest_in_open(lo: &Rat, hi: &Rat) -> Result<Rat> {
    if lo >= hi {
        return Err(Error::invalid(format!(
            "empty interval ({}, {})",
            format_rat(lo),
            format_rat(hi)
        )));
    }
    if lo.is_negative() {
        return Err(Error::invalid("interval below zero is not supported"));
    }
    Ok(simplest_rec(lo, hi))
}

fn simplest_rec(lo: &Rat, hi: &Rat) -> Rat {
    let floor = lo.floor();
    let next_int = &floor + Rat::one();
    // floor(lo) <= lo < floor(lo)+1, so next_int > lo always holds; it is in
    // the interval exactly when it is below hi.
    if next_int < *hi {
        return next_int;
    }
    let lo_f = lo - &floor;
    let hi_f = hi - &floor;
    if lo_f.is_zero() {
        // (0, hi_f): the simplest member is 1/k for the least k with 1/k < hi_f.
        let k = hi_f.recip().floor() + Rat::one();
        return floor + k.recip();
    }
    // Strictly inside (0, 1) on both ends: recurse on the reciprocal interval.
    let inner = simplest_rec(&hi_f.recip(), &lo_f.recip());
    floor + inner.recip()
}

/// The integer successor of `lo`: the smallest denominator-1 rational
/// strictly above it. Used by the degenerate attack on zero-population
/// levels, where the admissible interval is unbounded above.
pub fn simplest_above(lo: &Rat) -> Rat {
    lo.floor() + Rat::one()
}
