use super::UnitaryMatrix;
use crate::{Error, Result};

/// `|Tr(A B†)| / m`.
pub fn gate_fidelity(a: &UnitaryMatrix, b: &UnitaryMatrix) -> Result<f64> {
    let m = a.dim();
    if b.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: b.dim(),
        });
    }
    let mut tr = num_complex::Complex64::new(0.0, 0.0);
    for r in 0..m {
        for c in 0..m {
            tr += a[(r, c)] * b[(r, c)].conj();
        }
    }
    Ok(tr.norm() / m as f64)
}

const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Similarity `(Σ √(p_i q_i))²` of two probability vectors.
pub fn similarity(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    for (name, v) in [("p", p), ("q", q)] {
        if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("{name} has entry {x}")));
        }
        let total: f64 = v.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "{name} sums to {total}"
            )));
        }
    }
    let bc: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
    Ok((bc * bc).min(1.0))
}
