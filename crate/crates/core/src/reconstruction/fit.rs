use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::data::MeasurementData;
use super::model::model_visibility;
use crate::{ComplexMatrix, Error, Result, UnitaryMatrix};

/// Weighted residuals of `u` against every one-photon entry and every
/// present visibility; χ² is their squared norm.
pub(crate) fn residuals(u: &ComplexMatrix, data: &MeasurementData) -> Vec<f64> {
    let m = data.modes();
    let q = data.q();
    let records = data.visibility_records();
    let mut out = Vec::with_capacity(m * m + records.len());
    for i in 0..m {
        for k in 0..m {
            let s = data.single(i, k);
            out.push((u[(k, i)].norm_sqr() - s.value) / s.sigma);
        }
    }
    for r in records {
        let model = q * model_visibility(u, r.i, r.j, r.k, r.l).unwrap_or(0.0);
        out.push((model - r.v.value) / r.v.sigma);
    }
    out
}

/// `Σ (model − observed)² / σ²` over all one-photon entries and all present
/// visibilities; model visibilities include the `q` factor.
pub fn chi2(u: &ComplexMatrix, data: &MeasurementData) -> Result<f64> {
    if u.rows() != data.modes() || u.cols() != data.modes() {
        return Err(Error::DimensionMismatch {
            expected: data.modes(),
            found: u.rows(),
        });
    }
    Ok(residuals(u, data).iter().map(|r| r * r).sum())
}

/// Settings for the local search after candidate selection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefineOptions {
    /// Step of the coordinate-wise probe that precedes the descent.
    pub probe_step: f64,
    pub max_iterations: usize,
    /// Stop once an accepted step lowers χ² by less than this fraction.
    pub relative_tolerance: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self {
            probe_step: 0.02,
            max_iterations: 200,
            relative_tolerance: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Refined {
    pub unitary: UnitaryMatrix,
    pub iterations: usize,
    /// χ² after the probe and after every accepted step.
    pub trace: Vec<f64>,
}

/// Hermitian generator from `m²` real coordinates: the diagonal first, then
/// real and imaginary parts of the upper triangle.
fn generator(m: usize, x: &[f64]) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(m, m);
    for d in 0..m {
        h[(d, d)] = Complex64::new(x[d], 0.0);
    }
    let mut n = m;
    for a in 0..m {
        for b in a + 1..m {
            let z = Complex64::new(x[n], x[n + 1]);
            h[(a, b)] = z;
            h[(b, a)] = z.conj();
            n += 2;
        }
    }
    h
}

/// `U·C(H)` with the Cayley map `C(H) = (I − iH/2)⁻¹(I + iH/2)`, which is
/// exactly unitary for Hermitian `H`.
fn step(u: &UnitaryMatrix, x: &[f64]) -> UnitaryMatrix {
    let m = u.dim();
    let h = generator(m, x).to_nalgebra();
    let half_i = Complex64::new(0.0, 0.5);
    let id = DMatrix::<Complex64>::identity(m, m);
    let minus = &id - &h * half_i;
    let plus = &id + &h * half_i;
    let cayley = minus
        .lu()
        .solve(&plus)
        .expect("I − iH/2 is invertible for Hermitian H");
    let c = ComplexMatrix::from_nalgebra(&cayley);
    UnitaryMatrix::from_unchecked(u.as_matrix() * &c)
}

fn cost(u: &ComplexMatrix, data: &MeasurementData) -> f64 {
    residuals(u, data).iter().map(|r| r * r).sum()
}

/// Coordinate-wise probe followed by Levenberg-Marquardt on the unitary
/// group. Only steps that lower χ² are accepted, so the trace never rises.
pub(crate) fn refine(
    start: &UnitaryMatrix,
    data: &MeasurementData,
    opts: &RefineOptions,
) -> Refined {
    let m = start.dim();
    let dim = m * m;
    let mut u = start.clone();
    let mut current = cost(&u, data);
    let mut trace = vec![current];

    if opts.probe_step > 0.0 {
        let mut x = vec![0.0; dim];
        for c in 0..dim {
            for sign in [1.0, -1.0] {
                x[c] = sign * opts.probe_step;
                let trial = step(&u, &x);
                let value = cost(&trial, data);
                x[c] = 0.0;
                if value < current {
                    u = trial;
                    current = value;
                    break;
                }
            }
        }
        trace.push(current);
    }

    let mut lambda = 1e-3;
    let mut iterations = 0;
    let h = 1e-7;
    while iterations < opts.max_iterations && current > 0.0 {
        iterations += 1;
        let r0 = DVector::from_vec(residuals(&u, data));
        let mut jac = DMatrix::<f64>::zeros(r0.len(), dim);
        let mut x = vec![0.0; dim];
        for c in 0..dim {
            x[c] = h;
            let plus = residuals(&step(&u, &x), data);
            x[c] = -h;
            let minus = residuals(&step(&u, &x), data);
            x[c] = 0.0;
            for (row, (p, q)) in plus.iter().zip(&minus).enumerate() {
                jac[(row, c)] = (p - q) / (2.0 * h);
            }
        }
        let jt = jac.transpose();
        let normal = &jt * &jac;
        let gradient = &jt * &r0;
        let scale = normal.diagonal().max().max(1e-300);

        let mut accepted = None;
        for _ in 0..30 {
            let mut a = normal.clone();
            for d in 0..dim {
                a[(d, d)] += lambda * (normal[(d, d)] + 1e-9 * scale);
            }
            let Some(delta) = a.cholesky().map(|c| c.solve(&(-&gradient))) else {
                lambda *= 4.0;
                continue;
            };
            let trial = step(&u, delta.as_slice());
            let value = cost(&trial, data);
            if value < current {
                accepted = Some((trial, value));
                lambda = (lambda / 3.0).max(1e-12);
                break;
            }
            lambda *= 4.0;
            if lambda > 1e12 {
                break;
            }
        }
        let Some((trial, value)) = accepted else {
            break;
        };
        let drop = current - value;
        u = trial;
        current = value;
        trace.push(current);
        if drop <= opts.relative_tolerance * current.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    // re-project to wash out rounding accumulated over many steps
    let unitary = match UnitaryMatrix::repair(u.as_matrix()) {
        Ok(r) if cost(&r, data) <= current => r,
        _ => u,
    };
    Refined {
        unitary,
        iterations,
        trace,
    }
}
