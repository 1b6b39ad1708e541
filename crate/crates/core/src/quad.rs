//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 50;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn new(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> Self {
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        Self {
            a,
            b,
            fa,
            fm,
            fb,
            whole,
        }
    }
}

/// Integrates `f` over `[a, b]` until the Richardson error estimate of every
/// accepted panel falls below its share of `abs_tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    let tol = abs_tol.max(f64::MIN_POSITIVE);
    let m = 0.5 * (a + b);
    let root = Panel::new(a, b, f(a), f(m), f(b));
    let value = refine(&f, root, tol, MAX_DEPTH)?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NumericalInstability(
            "integrand produced a non-finite value".into(),
        ))
    }
}

fn refine<F: Fn(f64) -> f64>(f: &F, p: Panel, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let left = Panel::new(p.a, m, p.fa, f(lm), p.fm);
    let right = Panel::new(m, p.b, p.fm, f(rm), p.fb);
    let delta = left.whole + right.whole - p.whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left.whole + right.whole + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NumericalInstability(format!(
            "quadrature did not converge on [{}, {}]",
            p.a, p.b
        )));
    }
    Ok(refine(f, left, 0.5 * tol, depth - 1)? + refine(f, right, 0.5 * tol, depth - 1)?)
}

/// Integrates piecewise over consecutive `breaks`, splitting the tolerance in
/// proportion to panel width.
pub fn piecewise_simpson<F>(f: F, breaks: &[f64], abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (Some(&first), Some(&last)) = (breaks.first(), breaks.last()) else {
        return Ok(0.0);
    };
    let width = last - first;
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let share = if width > 0.0 {
            (w[1] - w[0]) / width
        } else {
            1.0
        };
        total += adaptive_simpson(&f, w[0], w[1], abs_tol * share)?;
    }
    Ok(total)
}
