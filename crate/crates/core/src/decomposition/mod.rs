//! Triangular beam-splitter meshes.
//!
//! An `m`-mode unitary is written as external port phases around a product
//! of `m(m−1)/2` two-mode elements, each a real beam splitter preceded by a
//! phase shifter on one of its inputs. Element labels run along the
//! diagonals of the triangle (for five modes: 1–4 act on neighbouring modes,
//! 5–7 on modes two apart, and so on); light meets them in
//! [`propagation_order`].

mod io;
mod mesh;
mod reck;

pub use io::{read_layout_csv, write_layout_csv, TablePrecision};
pub use mesh::{
    compose, element_count, element_index, element_modes, element_unitary, propagation_order,
    InterferometerLayout, MeshElement,
};
pub use reck::{decompose, decompose_with, GaugePinning};
