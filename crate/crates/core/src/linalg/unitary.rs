use std::ops::Deref;

use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::{Error, Result};

pub const DEFAULT_UNITARITY_TOLERANCE: f64 = 1e-9;

/// A square matrix known to satisfy `‖U†U − I‖_max ≤ tol`.
///
/// Printed three-decimal matrices are not unitary at the default tolerance;
/// load those through [`UnitaryMatrix::repair`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct UnitaryMatrix(ComplexMatrix);

impl TryFrom<ComplexMatrix> for UnitaryMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        UnitaryMatrix::new(m)
    }
}

impl From<UnitaryMatrix> for ComplexMatrix {
    fn from(u: UnitaryMatrix) -> Self {
        u.0
    }
}

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, DEFAULT_UNITARITY_TOLERANCE)
    }

    pub fn with_tolerance(m: ComplexMatrix, tolerance: f64) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "a unitary must be square and non-empty, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let residual = m.unitarity_residual();
        if residual > tolerance {
            return Err(Error::NotUnitary {
                residual,
                tolerance,
            });
        }
        Ok(Self(m))
    }

    /// Projects an approximately unitary matrix onto the nearest unitary.
    pub fn repair(m: &ComplexMatrix) -> Result<Self> {
        Ok(Self(m.polar_unitary()?))
    }

    pub(crate) fn from_unchecked(m: ComplexMatrix) -> Self {
        debug_assert!(m.is_square());
        Self(m)
    }

    pub fn identity(m: usize) -> Self {
        Self(ComplexMatrix::identity(m))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        Self(self.0.adjoint())
    }

    pub fn conj(&self) -> UnitaryMatrix {
        Self(self.0.conj())
    }

    pub fn compose(&self, after: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        Ok(Self(after.0.matmul(&self.0)?))
    }
}

impl Deref for UnitaryMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}
