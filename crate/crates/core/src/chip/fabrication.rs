use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{coupler, sbend, ChipGeometry};
use crate::decomposition::InterferometerLayout;
use crate::{Error, Result};

/// How a mesh amplitude `t` maps to the coupler's cross-coupled power `T`.
///
/// In the triangular mesh a photon that keeps its label hops to the
/// neighbouring physical waveguide, so the label-preserving amplitude `t` is
/// the cross-coupling amplitude by default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransmissivityMapping {
    /// `T = t²`.
    #[default]
    Cross,
    /// `T = 1 − t²`.
    Bar,
}

impl TransmissivityMapping {
    pub fn coupled_power(self, t: f64) -> f64 {
        match self {
            TransmissivityMapping::Cross => t * t,
            TransmissivityMapping::Bar => 1.0 - t * t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementFabrication {
    pub index: usize,
    pub t: f64,
    /// Cross-coupled power the coupler must reach.
    pub coupled_power: f64,
    /// Out-of-plane rotation (rad).
    pub angle: f64,
    pub alpha: f64,
    pub beta: f64,
    /// S-bend deformation on the `α` arm (mm).
    pub deformation_alpha: f64,
    /// S-bend deformation on the `β` arm (mm).
    pub deformation_beta: f64,
}

/// Everything needed to write a mesh, together with the geometry that the
/// numbers depend on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FabricationSpec {
    pub geometry: ChipGeometry,
    pub mapping: TransmissivityMapping,
    pub elements: Vec<ElementFabrication>,
}

impl FabricationSpec {
    pub fn nonzero_deformations(&self) -> usize {
        self.elements
            .iter()
            .map(|e| (e.deformation_alpha > 0.0) as usize + (e.deformation_beta > 0.0) as usize)
            .sum()
    }

    /// Fixed-width table: element, rotation in degrees, deformations in µm.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        if !self.geometry.calibrated {
            out.push_str("# geometry is uncalibrated\n");
        }
        let _ = writeln!(
            out,
            "{:>3}  {:>8}  {:>8}  {:>10}  {:>12}  {:>12}",
            "i", "t", "T", "angle_deg", "d_alpha_um", "d_beta_um"
        );
        for e in &self.elements {
            let _ = writeln!(
                out,
                "{:>3}  {:>8.4}  {:>8.4}  {:>10.4}  {:>12.4}  {:>12.4}",
                e.index,
                e.t,
                e.coupled_power,
                e.angle.to_degrees(),
                e.deformation_alpha * 1e3,
                e.deformation_beta * 1e3
            );
        }
        out
    }
}

/// Inverts every coupler and phase of `layout`. Problems are collected for
/// all elements and reported together.
pub fn layout_to_fabrication(
    layout: &InterferometerLayout,
    geometry: &ChipGeometry,
    mapping: TransmissivityMapping,
) -> Result<FabricationSpec> {
    geometry.validate()?;
    layout.validate()?;
    let mut problems = Vec::new();
    let mut elements = Vec::with_capacity(layout.elements.len());
    for e in &layout.elements {
        let power = mapping.coupled_power(e.t).clamp(0.0, 1.0);
        let angle = coupler::invert_transmissivity_to_angle(power, geometry)
            .map_err(|err| problems.push(format!("element {}: {err}", e.index)))
            .unwrap_or(f64::NAN);
        let mut deform = |phase: f64, name: &str| {
            sbend::invert_phase_to_deformation(phase.clamp(0.0, std::f64::consts::PI), geometry)
                .map_err(|err| problems.push(format!("element {} {name}: {err}", e.index)))
                .unwrap_or(f64::NAN)
        };
        let deformation_alpha = deform(e.alpha, "alpha");
        let deformation_beta = deform(e.beta, "beta");
        elements.push(ElementFabrication {
            index: e.index,
            t: e.t,
            coupled_power: power,
            angle,
            alpha: e.alpha,
            beta: e.beta,
            deformation_alpha,
            deformation_beta,
        });
    }
    if !problems.is_empty() {
        return Err(Error::Infeasible(problems));
    }
    Ok(FabricationSpec {
        geometry: geometry.clone(),
        mapping,
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chip::{coupler_transmissivity, deformation_phase};
    use crate::fixtures::sampled_layout;

    #[test]
    fn identity_layout_needs_full_coupling() {
        let layout = InterferometerLayout::identity(5);
        let g = ChipGeometry::default();
        let spec = layout_to_fabrication(&layout, &g, TransmissivityMapping::Cross).unwrap();
        assert!(spec
            .elements
            .iter()
            .all(|e| e.deformation_alpha == 0.0 && e.deformation_beta == 0.0));
        assert!(spec.elements.iter().all(|e| e.coupled_power == 1.0));

        let weak = ChipGeometry {
            z: 0.3,
            ..ChipGeometry::default()
        };
        match layout_to_fabrication(&layout, &weak, TransmissivityMapping::Cross) {
            Err(Error::Infeasible(list)) => assert_eq!(list.len(), 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sampled_layout_fabricates() {
        let g = ChipGeometry::default();
        let spec =
            layout_to_fabrication(&sampled_layout(), &g, TransmissivityMapping::Cross).unwrap();
        assert_eq!(spec.elements.len(), 10);
        assert_eq!(spec.nonzero_deformations(), 8);
        for e in &spec.elements {
            assert!((coupler_transmissivity(e.angle, &g).unwrap() - e.t * e.t).abs() < 1e-9);
            assert!((deformation_phase(e.deformation_alpha, &g).unwrap() - e.alpha).abs() < 1e-9);
            assert!((deformation_phase(e.deformation_beta, &g).unwrap() - e.beta).abs() < 1e-9);
        }
        let table = spec.to_table();
        assert_eq!(table.lines().count(), 12);
        assert!(table.starts_with("# geometry is uncalibrated"));
    }

    #[test]
    fn bar_mapping() {
        assert_eq!(TransmissivityMapping::Bar.coupled_power(0.6), 1.0 - 0.36);
        assert_eq!(TransmissivityMapping::Cross.coupled_power(0.6), 0.36);
    }
}
