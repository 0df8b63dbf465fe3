use std::f64::consts::FRAC_PI_2;

use super::ChipGeometry;
use crate::{Error, Result};

/// `(C₁, C₂)` with `s² = C₁ − C₂ cos α`, in µm².
fn constants(g: &ChipGeometry) -> (f64, f64) {
    let h = g.h_um();
    let hs = h + g.s_min;
    (h * h + hs * hs, 2.0 * h * hs)
}

fn check_angle(angle: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&angle) {
        return Err(Error::OutOfRange(format!(
            "rotation angle {angle} rad outside [0, π/2]"
        )));
    }
    Ok(())
}

/// Waveguide spacing (µm) after rotating one arm by `angle` about an axis at
/// distance `h` from it: `s² = h² + (h + s_min)² − 2h(h + s_min) cos α`.
pub fn coupler_spacing(angle: f64, g: &ChipGeometry) -> Result<f64> {
    check_angle(angle)?;
    g.validate()?;
    let (c1, c2) = constants(g);
    // clamp rounding at α = 0
    Ok((c1 - c2 * angle.cos()).max(g.s_min * g.s_min).sqrt())
}

/// Coupling strength times interaction length at `angle`.
fn coupling_phase(angle: f64, g: &ChipGeometry) -> Result<f64> {
    let s = coupler_spacing(angle, g)?;
    Ok(g.kappa0 * (-s / g.s0).exp() * g.z)
}

/// Cross-coupled power fraction `T = sin²(κ₀ e^{−s/s₀} Z)`.
pub fn coupler_transmissivity(angle: f64, g: &ChipGeometry) -> Result<f64> {
    Ok(coupling_phase(angle, g)?.sin().powi(2))
}

/// Angles on which `T` is strictly decreasing and invertible: those with
/// `κZ ≤ π/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleBranch {
    pub min_angle: f64,
    pub max_angle: f64,
    /// `T` at `max_angle`.
    pub min_t: f64,
    /// `T` at `min_angle` (1 when the branch starts past `α = 0`).
    pub max_t: f64,
}

pub fn transmissivity_range(g: &ChipGeometry) -> Result<AngleBranch> {
    g.validate()?;
    let (c1, c2) = constants(g);
    let strongest = g.kappa0 * (-g.s_min / g.s0).exp() * g.z;
    let (min_angle, max_t) = if strongest <= FRAC_PI_2 {
        (0.0, strongest.sin().powi(2))
    } else {
        let s = g.s0 * (g.kappa0 * g.z / FRAC_PI_2).ln();
        let cos = ((c1 - s * s) / c2).clamp(-1.0, 1.0);
        (cos.acos(), 1.0)
    };
    if min_angle > FRAC_PI_2 {
        return Err(Error::Infeasible(vec![format!(
            "coupler stays over-coupled (κZ > π/2) up to a right-angle rotation"
        )]));
    }
    Ok(AngleBranch {
        min_angle,
        max_angle: FRAC_PI_2,
        min_t: coupler_transmissivity(FRAC_PI_2, g)?,
        max_t,
    })
}

/// Closed-form inverse of [`coupler_transmissivity`] on the monotone branch:
/// `α = arccos((C₁ − s₀²(ln κ₀Z − ln arcsin √T)²)/C₂)`.
pub fn invert_transmissivity_to_angle(target: f64, g: &ChipGeometry) -> Result<f64> {
    let branch = transmissivity_range(g)?;
    let unattainable = || Error::UnattainableTransmissivity {
        target,
        min: branch.min_t,
        max: branch.max_t,
    };
    if !(0.0..=1.0).contains(&target) || target <= 0.0 {
        return Err(unattainable());
    }
    let (c1, c2) = constants(g);
    let x = target.sqrt().asin();
    let s = g.s0 * ((g.kappa0 * g.z).ln() - x.ln());
    let arg = (c1 - s * s) / c2;
    if !(-1.0..=1.0).contains(&arg) || s < g.s_min * (1.0 - 1e-12) {
        return Err(unattainable());
    }
    let angle = arg.acos();
    let slack = 1e-12;
    if angle < branch.min_angle - slack || angle > branch.max_angle + slack {
        return Err(unattainable());
    }
    Ok(angle.clamp(branch.min_angle, branch.max_angle))
}
