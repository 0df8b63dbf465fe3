//! Adaptive Simpson integration.

use crate::{Error, Result};

/// Stop splitting below this depth and report non-convergence.
const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The interval is first cut into `panels` equal pieces (at least one), each
/// refined independently with a share of the tolerance proportional to its
/// width. Starting from several panels keeps smooth periodic integrands from
/// fooling the first error estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    panels: usize,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || tol.is_nan() || tol <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "integration over [{a}, {b}] with tolerance {tol}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let hi = if p + 1 == panels { b } else { lo + h };
        let fl = f(lo);
        let fh = f(hi);
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        let whole = simpson(lo, hi, fl, fm, fh);
        total += refine(
            &f,
            lo,
            hi,
            fl,
            fm,
            fh,
            whole,
            tol / panels as f64,
            MAX_DEPTH,
        )?;
    }
    Ok(total)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }
    if delta.abs() <= 15.0 * tol || m <= a || m >= b {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NoConvergence {
            iterations: MAX_DEPTH as usize,
            last_change: delta.abs(),
        });
    }
    Ok(refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12, 1).unwrap();
        assert!((v - 0.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_and_oscillatory() {
        let v = adaptive_simpson(f64::sin, 0.0, PI, 1e-12, 1).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        let w = adaptive_simpson(|x| (20.0 * x).cos().powi(2), 0.0, 2.0 * PI, 1e-10, 8).unwrap();
        assert!((w - PI).abs() < 1e-9);
        let g = adaptive_simpson(|x| (-x * x).exp(), -8.0, 8.0, 1e-12, 4).unwrap();
        assert!((g - PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, 1e-9, 1).unwrap(), 0.0);
        let v = adaptive_simpson(|x| x, 1.0, 0.0, 1e-12, 1).unwrap();
        assert!((v + 0.5).abs() < 1e-14);
        assert!(adaptive_simpson(|x| x, 0.0, 1.0, 0.0, 1).is_err());
    }
}
