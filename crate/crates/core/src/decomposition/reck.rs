use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::mesh::{element_block, element_index, InterferometerLayout, MeshElement};
use crate::linalg::wrap_phase;
use crate::{ComplexMatrix, GaugePhases, Result, UnitaryMatrix};

/// Entries smaller than this are treated as already nulled.
const NULL_TOLERANCE: f64 = 1e-13;

/// How the input-port phases are used to zero element phases.
///
/// Every element in the first nulling row (`p = m − 1`) is the first to
/// touch its mode `q`, so the phase of input `q` is free at that point; the
/// phase of input `m − 1` is free at the very first element.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GaugePinning {
    /// The first element has no phases and every other first-row element
    /// has `β = 0`. The input phase is only moved when the element would
    /// otherwise need a `β` shifter. This reproduces the conventional
    /// parameter tables but depends on the input phases of `U`.
    #[default]
    Minimal,
    /// Every first-row element has `α = β = 0`. The internal parameters are
    /// then independent of any external gauge applied to `U`.
    Full,
}

/// Triangular nulling into the default mesh with [`GaugePinning::Minimal`].
pub fn decompose(u: &UnitaryMatrix) -> Result<InterferometerLayout> {
    decompose_with(u, GaugePinning::Minimal)
}

/// Nulls row `m−1`, then row `m−2`, … of `U·Φ` by right-multiplying inverse
/// element blocks; the remaining diagonal becomes the output gauge and `Φ⁻¹`
/// the input gauge.
///
/// For each element the relative phase `δ` of the two entries being merged
/// must equal `α − β`. It is realised as `α = δ` when `δ ≤ π` and as
/// `β = 2π − δ` otherwise, so every element uses at most one shifter and
/// both phases stay in `[0, π]`.
pub fn decompose_with(u: &UnitaryMatrix, pinning: GaugePinning) -> Result<InterferometerLayout> {
    let m = u.dim();
    let mut w: ComplexMatrix = u.as_matrix().clone();
    let mut input = vec![0.0; m];
    let mut params = vec![(1.0, 0.0, 0.0); super::element_count(m)];
    let mut first = true;

    for p in (1..m).rev() {
        for q in (0..p).rev() {
            let mut delta = relative_phase(w[(p, p)], w[(p, q)]);
            if p == m - 1 && delta != 0.0 {
                // shifting column c by θ changes δ by ∓θ
                let pin = first || pinning == GaugePinning::Full || delta > PI;
                if pin {
                    if first {
                        shift_column(&mut w, p, -delta);
                        input[p] -= delta;
                    } else {
                        shift_column(&mut w, q, delta);
                        input[q] += delta;
                    }
                    delta = 0.0;
                }
            }
            first = false;

            let (a, b) = (w[(p, p)].norm(), w[(p, q)].norm());
            let n = a.hypot(b);
            let t = if n < NULL_TOLERANCE || b < NULL_TOLERANCE {
                1.0
            } else {
                a / n
            };
            let (alpha, beta) = if delta <= PI {
                (delta, 0.0)
            } else {
                (0.0, TAU - delta)
            };
            unapply_block(&mut w, p, q, element_block(t, alpha, beta));
            let idx = element_index(m, q, p)?;
            params[idx - 1] = (t, alpha, beta);
        }
    }

    let output: Vec<f64> = (0..m).map(|k| w[(k, k)].arg()).collect();
    let gauge = GaugePhases::new(input.iter().map(|x| -x).collect(), output)?;
    let elements = params
        .into_iter()
        .enumerate()
        .map(|(k, (t, alpha, beta))| {
            let modes = super::element_modes(m, k + 1)?;
            Ok(MeshElement {
                index: k + 1,
                modes,
                t,
                alpha,
                beta,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InterferometerLayout {
        modes: m,
        elements,
        gauge,
    })
}

/// `arg(w_p) − arg(w_q)` in `[0, 2π)`, or 0 when either entry vanishes.
fn relative_phase(wp: Complex64, wq: Complex64) -> f64 {
    if wp.norm() < NULL_TOLERANCE || wq.norm() < NULL_TOLERANCE {
        return 0.0;
    }
    let d = wrap_phase(wp.arg() - wq.arg());
    // wrap_phase can round 2π − ε up to 2π
    if d >= TAU {
        0.0
    } else {
        d
    }
}

fn shift_column(w: &mut ComplexMatrix, c: usize, theta: f64) {
    let ph = Complex64::from_polar(1.0, theta);
    for r in 0..w.rows() {
        w[(r, c)] *= ph;
    }
}

/// `W ← W · B†` where `B` acts on modes `(p, q)`.
fn unapply_block(w: &mut ComplexMatrix, p: usize, q: usize, b: [[Complex64; 2]; 2]) {
    for r in 0..w.rows() {
        let wp = w[(r, p)];
        let wq = w[(r, q)];
        w[(r, p)] = wp * b[0][0].conj() + wq * b[0][1].conj();
        w[(r, q)] = wp * b[1][0].conj() + wq * b[1][1].conj();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::compose;
    use crate::linalg::{align_gauge, apply_gauge, gate_fidelity, haar_sample, seeded_rng};
    use rand::Rng;

    #[test]
    fn identity_decomposes_trivially() {
        let layout = decompose(&UnitaryMatrix::identity(5)).unwrap();
        for e in &layout.elements {
            assert_eq!((e.t, e.alpha, e.beta), (1.0, 0.0, 0.0));
        }
        assert_eq!(layout.gauge, GaugePhases::trivial(5));
    }

    #[test]
    fn round_trip_is_exact_with_gauge() {
        for (m, seed) in [(2, 1), (3, 2), (5, 3), (8, 4)] {
            let u = haar_sample(m, seed).unwrap();
            for pinning in [GaugePinning::Minimal, GaugePinning::Full] {
                let layout = decompose_with(&u, pinning).unwrap();
                let v = compose(&layout).unwrap();
                assert!(v.max_abs_diff(&u).unwrap() < 1e-12, "m={m} {pinning:?}");
                let (aligned, _) = align_gauge(&v, &u).unwrap();
                assert!(gate_fidelity(&aligned, &u).unwrap() > 1.0 - 1e-12);
            }
        }
    }

    #[test]
    fn one_shifter_per_element() {
        let u = haar_sample(6, 11).unwrap();
        for pinning in [GaugePinning::Minimal, GaugePinning::Full] {
            let layout = decompose_with(&u, pinning).unwrap();
            for e in &layout.elements {
                assert!((0.0..=PI).contains(&e.alpha) && (0.0..=PI).contains(&e.beta));
                assert!(e.alpha == 0.0 || e.beta == 0.0);
                assert!((0.0..=1.0).contains(&e.t));
            }
        }
    }

    #[test]
    fn first_row_pinning() {
        let u = haar_sample(5, 21).unwrap();
        let minimal = decompose(&u).unwrap();
        assert_eq!(
            (minimal.elements[0].alpha, minimal.elements[0].beta),
            (0.0, 0.0)
        );
        for idx in [5, 8, 10] {
            assert_eq!(minimal.element(idx).unwrap().beta, 0.0);
        }
        let full = decompose_with(&u, GaugePinning::Full).unwrap();
        for idx in [1, 5, 8, 10] {
            let e = full.element(idx).unwrap();
            assert_eq!((e.alpha, e.beta), (0.0, 0.0));
        }
    }

    #[test]
    fn full_pinning_ignores_external_phases() {
        let mut rng = seeded_rng(5);
        let u = haar_sample(5, 8).unwrap();
        let base = decompose_with(&u, GaugePinning::Full).unwrap();
        for _ in 0..10 {
            let g = GaugePhases::new(
                (0..5).map(|_| rng.random_range(0.0..TAU)).collect(),
                (0..5).map(|_| rng.random_range(0.0..TAU)).collect(),
            )
            .unwrap();
            let other = decompose_with(&apply_gauge(&u, &g).unwrap(), GaugePinning::Full).unwrap();
            for (a, b) in base.elements.iter().zip(&other.elements) {
                assert!((a.t - b.t).abs() < 1e-12);
                let da = (a.alpha - b.alpha).abs();
                let db = (a.beta - b.beta).abs();
                assert!(
                    da.min(TAU - da) < 1e-9 && db.min(TAU - db) < 1e-9,
                    "{a:?} vs {b:?}"
                );
            }
        }
    }

    #[test]
    fn permutation_matrices_decompose() {
        let mut m = ComplexMatrix::zeros(4, 4);
        for (c, r) in [2usize, 0, 3, 1].into_iter().enumerate() {
            m[(r, c)] = Complex64::new(1.0, 0.0);
        }
        let u = UnitaryMatrix::new(m).unwrap();
        let layout = decompose(&u).unwrap();
        assert!(compose(&layout).unwrap().max_abs_diff(&u).unwrap() < 1e-14);
    }
}
