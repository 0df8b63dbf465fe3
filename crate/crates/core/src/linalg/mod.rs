//! Complex linear algebra for interferometer unitaries.

mod gauge;
mod haar;
mod matrix;
mod metrics;
mod unitary;

pub use gauge::{align_gauge, align_gauge_with, apply_gauge, AlignOptions, GaugePhases};
pub use haar::{haar_sample, haar_sample_with_rng, seeded_rng, SeededRng};
pub use matrix::ComplexMatrix;
pub use metrics::{gate_fidelity, similarity};
pub use unitary::{UnitaryMatrix, DEFAULT_UNITARITY_TOLERANCE};

use std::f64::consts::TAU;

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}
