use std::f64::consts::{PI, TAU};

use super::ChipGeometry;
use crate::quadrature::adaptive_simpson;
use crate::{Error, Result};

/// Absolute tolerance of arc-length integrals (mm).
const LENGTH_TOLERANCE: f64 = 1e-9;
/// Absolute tolerance of the length difference behind a phase (mm); about
/// 1e-11 rad at visible wavelengths.
const DELTA_TOLERANCE: f64 = 1e-15;
const PANELS: usize = 16;
const BISECTION_STEPS: usize = 200;
const PHASE_TOLERANCE: f64 = 1e-12;
/// Fraction of the injectivity limit `L/2π` searched by the inversion.
const DEFORMATION_CAP: f64 = 0.999;

fn check_injective(l: f64, d: f64) -> Result<()> {
    let limit = l / TAU;
    if !(d.is_finite() && d.abs() < limit) {
        return Err(Error::NonInjectiveDeformation { d, limit });
    }
    Ok(())
}

/// Arc length of `y = −(h/2) cos(2πx/L)` after the axial stretch
/// `x → x + d sin(2πx/L)`, for `0 ≤ x ≤ L`.
pub fn sbend_path_length(h: f64, l: f64, d: f64) -> Result<f64> {
    if !(l > 0.0 && l.is_finite() && h.is_finite()) {
        return Err(Error::OutOfRange(format!("S-bend with h = {h}, L = {l}")));
    }
    check_injective(l, d)?;
    let k = TAU / l;
    let (a, b) = (d * k, 0.5 * h * k);
    adaptive_simpson(
        |x| {
            let (s, c) = (k * x).sin_cos();
            (1.0 + a * c).hypot(b * s)
        },
        0.0,
        l,
        LENGTH_TOLERANCE,
        PANELS,
    )
}

/// Length added by the deformation, integrated directly so that small
/// differences do not cancel: `√((1+a)² + y'²) − √(1 + y'²) = (2a + a²)/(…)`.
fn length_increase(g: &ChipGeometry, d: f64) -> Result<f64> {
    check_injective(g.l, d)?;
    if d == 0.0 {
        return Ok(0.0);
    }
    let k = TAU / g.l;
    let (a, b) = (d * k, 0.5 * g.h * k);
    adaptive_simpson(
        |x| {
            let (s, c) = (k * x).sin_cos();
            let ac = a * c;
            let y = b * s;
            (2.0 * ac + ac * ac) / ((1.0 + ac).hypot(y) + 1.0f64.hypot(y))
        },
        0.0,
        g.l,
        DELTA_TOLERANCE,
        PANELS,
    )
}

/// `Δφ = (2π/λ)·n_eff·(length(d) − length(0))`.
pub fn deformation_phase(d: f64, g: &ChipGeometry) -> Result<f64> {
    g.validate()?;
    Ok(TAU / g.lambda_mm() * g.n_eff * length_increase(g, d)?)
}

/// Largest deformation the inversion will consider (mm).
pub fn max_deformation(g: &ChipGeometry) -> f64 {
    DEFORMATION_CAP * g.l / TAU
}

/// Phase at [`max_deformation`].
pub fn max_phase(g: &ChipGeometry) -> Result<f64> {
    deformation_phase(max_deformation(g), g)
}

/// Smallest non-negative deformation giving `target ∈ [0, π]`, by bisection.
pub fn invert_phase_to_deformation(target: f64, g: &ChipGeometry) -> Result<f64> {
    g.validate()?;
    if !(0.0..=PI).contains(&target) {
        return Err(Error::OutOfRange(format!("phase {target} outside [0, π]")));
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    let mut hi = max_deformation(g);
    let top = deformation_phase(hi, g)?;
    if top < target {
        return Err(Error::UnreachablePhase { target, max: top });
    }
    let mut lo = 0.0;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let phase = deformation_phase(mid, g)?;
        if (phase - target).abs() <= PHASE_TOLERANCE {
            return Ok(mid);
        }
        if phase < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_line() {
        assert!((sbend_path_length(0.0, 2.5, 0.0).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn stretching_adds_length() {
        let base = sbend_path_length(0.04, 2.5, 0.0).unwrap();
        assert!(base > 2.5);
        let longer = sbend_path_length(0.04, 2.5, 0.05).unwrap();
        assert!(longer > base);
        let g = ChipGeometry::default();
        let direct = TAU / g.lambda_mm() * g.n_eff * (longer - base);
        assert!((deformation_phase(0.05, &g).unwrap() - direct).abs() < 1e-4);
    }

    #[test]
    fn injectivity_limit() {
        let l = 2.5;
        assert!(matches!(
            sbend_path_length(0.04, l, l / TAU),
            Err(Error::NonInjectiveDeformation { .. })
        ));
        assert!(sbend_path_length(0.04, l, 0.99 * l / TAU).is_ok());
    }

    #[test]
    fn phase_scales_with_index_and_wavelength() {
        let g = ChipGeometry::default();
        let base = deformation_phase(0.02, &g).unwrap();
        let mut g2 = g.clone();
        g2.n_eff = 0.8;
        assert!((deformation_phase(0.02, &g2).unwrap() - 0.5 * base).abs() < 1e-12 * base);
        let mut g3 = g.clone();
        g3.lambda = 2.0 * g.lambda;
        assert!((deformation_phase(0.02, &g3).unwrap() - 0.5 * base).abs() < 1e-12 * base);
    }

    #[test]
    fn inversion_round_trip() {
        let g = ChipGeometry::default();
        assert_eq!(invert_phase_to_deformation(0.0, &g).unwrap(), 0.0);
        for k in 1..=10 {
            let target = PI * k as f64 / 10.0;
            let d = invert_phase_to_deformation(target, &g).unwrap();
            assert!(d > 0.0 && d < max_deformation(&g));
            assert!((deformation_phase(d, &g).unwrap() - target).abs() < 1e-9);
        }
        assert!(invert_phase_to_deformation(3.5, &g).is_err());
    }

    #[test]
    fn unreachable_phase_reports_maximum() {
        let g = ChipGeometry {
            l: 0.0001,
            ..ChipGeometry::default()
        };
        match invert_phase_to_deformation(PI, &g) {
            Err(Error::UnreachablePhase { max, .. }) => assert!(max < PI),
            other => panic!("{other:?}"),
        }
    }
}
