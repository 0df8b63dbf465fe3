//! Physical model of a laser-written 3D waveguide chip.
//!
//! Phases come from stretching an S-bend waveguide along its axis; the
//! transmissivity of each directional coupler is set by rotating one arm out
//! of the chip plane, which increases the waveguide spacing.
//!
//! Lengths follow the units of the fabrication literature: `h`, `L`, `Z`
//! and deformations in mm, spacings in µm, wavelength in nm.

mod coupler;
mod fabrication;
mod sbend;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use coupler::{
    coupler_spacing, coupler_transmissivity, invert_transmissivity_to_angle, transmissivity_range,
    AngleBranch,
};
pub use fabrication::{
    layout_to_fabrication, ElementFabrication, FabricationSpec, TransmissivityMapping,
};
pub use sbend::{
    deformation_phase, invert_phase_to_deformation, max_deformation, max_phase, sbend_path_length,
};

/// Geometry and material constants of the chip.
///
/// Only `kappa0`, `s0` and `lambda` are measured values; `n_eff` follows
/// from the quoted equivalence of 0.25 rad and 20 nm of path length. The
/// bend and coupler dimensions `h`, `L`, `Z`, `s_min` are placeholders, which
/// is why the default has `calibrated = false`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChipGeometry {
    /// S-bend transverse extension (mm).
    pub h: f64,
    /// S-bend longitudinal extension (mm).
    #[serde(rename = "L")]
    pub l: f64,
    /// Coupler interaction length (mm).
    #[serde(rename = "Z")]
    pub z: f64,
    /// Minimum in-plane waveguide spacing (µm).
    pub s_min: f64,
    /// Coupling constant at zero spacing (mm⁻¹).
    pub kappa0: f64,
    /// Coupling decay length (µm).
    pub s0: f64,
    /// Wavelength (nm).
    pub lambda: f64,
    pub n_eff: f64,
    #[serde(default)]
    pub calibrated: bool,
}

impl Default for ChipGeometry {
    fn default() -> Self {
        Self {
            h: 0.04,
            l: 2.5,
            z: 0.7,
            s_min: 7.0,
            kappa0: 42.0,
            s0: 2.4,
            lambda: 806.0,
            n_eff: 1.6,
            calibrated: false,
        }
    }
}

impl ChipGeometry {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("h", self.h),
            ("L", self.l),
            ("Z", self.z),
            ("s_min", self.s_min),
            ("kappa0", self.kappa0),
            ("s0", self.s0),
            ("lambda", self.lambda),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::OutOfRange(format!(
                    "geometry {name} = {v} must be positive"
                )));
            }
        }
        if !(self.n_eff > 0.0 && self.n_eff < 3.0) {
            return Err(Error::OutOfRange(format!(
                "geometry n_eff = {} outside (0, 3)",
                self.n_eff
            )));
        }
        Ok(())
    }

    /// Wavelength in mm.
    pub(crate) fn lambda_mm(&self) -> f64 {
        self.lambda * 1e-6
    }

    /// `h` in µm, the unit of the coupler formulas.
    pub(crate) fn h_um(&self) -> f64 {
        self.h * 1e3
    }
}
