//! Fock states and exact multi-photon output statistics.

mod distribution;
mod fock;
mod hom;
mod partial;
mod sample;

pub use distribution::{
    build_submatrix, classical_distribution, classical_distribution_with, full_distribution,
    full_distribution_with, output_probability, Model, Outcome, OutputDistribution, Restriction,
    SamplerOptions,
};
pub use fock::{binomial, collision_free_states, enumerate_states, FockState};
pub use hom::{
    coincidence_probabilities, degrade_visibility, hom_visibility, mode_pairs, visibility_tensor,
    VisibilityTensor, MIN_CLASSICAL_COINCIDENCE,
};
pub use partial::{
    three_photon_partial_distribution, three_photon_partial_distribution_with, PhotonRoles,
};
pub use sample::sample_outcomes;

pub(crate) use hom::pair_index;
