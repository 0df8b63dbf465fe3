//! Multi-photon interference in linear-optical interferometers.
//!
//! The crate is organised around five pieces:
//!
//! - [`linalg`]: dense complex matrices, Haar sampling, gauge phases and the
//!   gate-fidelity / similarity metrics.
//! - [`sampler`]: Fock states, permanents and exact output distributions for
//!   indistinguishable, distinguishable and partially distinguishable photons,
//!   plus Hong-Ou-Mandel visibilities.
//! - [`decomposition`]: triangular (Reck) meshes of beam splitters with phase
//!   shifters confined to `[0, π]`.
//! - [`chip`]: the physical model of a laser-written 3D chip, mapping mesh
//!   parameters to waveguide deformations and coupler rotations.
//! - [`reconstruction`]: recovering an interferometer unitary from one-photon
//!   probabilities and two-photon visibilities.
//!
//! Heavy inner loops (permanents, outcome enumeration, candidate
//! reconstructions) run on rayon when the `parallel` feature is enabled; every
//! such routine also has a sequential path selected through [`Execution`].

pub mod chip;
pub mod decomposition;
mod error;
pub mod exec;
pub mod fixtures;
pub mod linalg;
pub mod permanent;
pub mod quadrature;
pub mod reconstruction;
pub mod sampler;

pub use error::{Error, Result};
pub use exec::Execution;
pub use linalg::{ComplexMatrix, GaugePhases, UnitaryMatrix};
pub use num_complex::Complex64;
pub use sampler::FockState;
