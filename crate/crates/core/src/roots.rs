//! Bracketed scalar root finding: bisection for a guaranteed root, Newton to
//! sharpen it.

use crate::{Error, Result};

const MAX_BISECTIONS: usize = 400;

/// Bisect `f` on `[lo, hi]` until the bracket is narrower than `xtol`.
///
/// `f(lo)` and `f(hi)` must not share a strict sign.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Convergence(format!(
            "no sign change on [{lo}, {hi}]: f = ({flo}, {fhi})"
        )));
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
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
    }
    Ok(0.5 * (lo + hi))
}

/// Up to `steps` Newton iterations from `x`, confined to `[lo, hi]`.
///
/// A step is only accepted when it stays inside the bracket and does not
/// increase `|f|`, so the polished value is never worse than the input.
pub fn newton_polish<F, D>(f: F, df: D, mut x: f64, lo: f64, hi: f64, steps: usize) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut fx = f(x);
    for _ in 0..steps {
        let d = df(x);
        if d == 0.0 || !d.is_finite() || fx == 0.0 {
            break;
        }
        let next = x - fx / d;
        if !(lo..=hi).contains(&next) {
            break;
        }
        let fnext = f(next);
        if !(fnext.abs() <= fx.abs()) {
            break;
        }
        x = next;
        fx = fnext;
    }
    x
}

/// Find `hi > start` with `f(hi) >= 0`, growing the width 1, 2, 4, ... from
/// `start`. Fails once `hi` would pass `cap`.
pub fn grow_bracket<F: Fn(f64) -> f64>(f: F, start: f64, cap: f64) -> Result<f64> {
    let mut width = 1.0;
    loop {
        let hi = (start + width).min(cap);
        if f(hi) >= 0.0 {
            return Ok(hi);
        }
        if hi >= cap {
            return Err(Error::Overflow(format!(
                "bracket exceeded cap {cap} without a sign change"
            )));
        }
        width *= 2.0;
    }
}
