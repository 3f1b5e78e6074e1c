//! Bracketing root refinement used by the profile analysis and domain maps.

use crate::error::{Error, Result};

/// Bisection on [lo, hi]; f(lo) and f(hi) must have opposite signs.
/// Refines until the bracket width drops below `xtol + rtol * |mid|`.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64, rtol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        if hi - lo <= xtol + rtol * mid.abs() {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(0.5 * (lo + hi))
}
