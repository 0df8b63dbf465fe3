//! Reference five-mode data shipped with the crate.
//!
//! The sampled target unitary and the unitary reconstructed from measured
//! one- and two-photon data are printed to three decimals, so they are
//! unitary only to about `1e-3`. The `*_unitary` accessors return the
//! nearest exact unitary (polar projection); the `*_raw` accessors return
//! the printed numbers.

use crate::decomposition::{read_layout_csv, InterferometerLayout};
use crate::{ComplexMatrix, UnitaryMatrix};

pub const SAMPLED_U_JSON: &str = include_str!("../fixtures/sampled_u.json");
pub const RECONSTRUCTED_U_JSON: &str = include_str!("../fixtures/reconstructed_u.json");
pub const SAMPLED_LAYOUT_CSV: &str = include_str!("../fixtures/sampled_layout.csv");

/// Two-photon indistinguishability used with the reference data.
pub const INDISTINGUISHABILITY: f64 = 0.95;

/// Overlap `p` between the odd photon and the pair in the three-photon
/// experiment; the indistinguishable weight is `p²`.
pub const THREE_PHOTON_OVERLAP: f64 = 0.63;

fn parse(json: &str) -> ComplexMatrix {
    serde_json::from_str(json).expect("shipped fixture is valid")
}

pub fn sampled_unitary_raw() -> ComplexMatrix {
    parse(SAMPLED_U_JSON)
}

pub fn sampled_unitary() -> UnitaryMatrix {
    UnitaryMatrix::repair(&sampled_unitary_raw()).expect("shipped fixture is full rank")
}

pub fn reconstructed_unitary_raw() -> ComplexMatrix {
    parse(RECONSTRUCTED_U_JSON)
}

pub fn reconstructed_unitary() -> UnitaryMatrix {
    UnitaryMatrix::repair(&reconstructed_unitary_raw()).expect("shipped fixture is full rank")
}

/// Two-decimal mesh parameters of the sampled unitary.
pub fn sampled_layout() -> InterferometerLayout {
    read_layout_csv(SAMPLED_LAYOUT_CSV.as_bytes()).expect("shipped fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        let raw = sampled_unitary_raw();
        assert_eq!(raw.rows(), 5);
        assert!(raw.unitarity_residual() > 1e-4 && raw.unitarity_residual() < 5e-3);
        assert!(sampled_unitary().unitarity_residual() < 1e-12);
        assert!(reconstructed_unitary().unitarity_residual() < 1e-12);
        let layout = sampled_layout();
        assert_eq!(layout.elements.len(), 10);
        assert_eq!(layout.nonzero_phase_count(), 8);
    }
}
