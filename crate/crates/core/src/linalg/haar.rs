use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, UnitaryMatrix};
use crate::{Error, Result};

/// The generator used everywhere a seed is accepted.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws an `m × m` unitary from the Haar measure.
///
/// QR of a complex Ginibre matrix, with each column of `Q` multiplied by the
/// phase of the matching diagonal entry of `R` so the factorisation is unique.
pub fn haar_sample(m: usize, seed: u64) -> Result<UnitaryMatrix> {
    haar_sample_with_rng(m, &mut seeded_rng(seed))
}

pub fn haar_sample_with_rng<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    if m == 0 {
        return Err(Error::InvalidDimension("Haar sampling needs m >= 1".into()));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut data = Vec::with_capacity(m * m);
    for _ in 0..m * m {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        data.push(Complex64::new(re * scale, im * scale));
    }
    let z = ComplexMatrix::new(m, m, data)?;
    let qr = z.to_nalgebra().qr();
    let q = qr.q();
    let r = qr.r();
    let q = ComplexMatrix::from_fn(m, m, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q[(i, j)] * phase
    });
    Ok(UnitaryMatrix::from_unchecked(q))
}
