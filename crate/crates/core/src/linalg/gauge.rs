use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{wrap_phase, ComplexMatrix, UnitaryMatrix};
use crate::{Error, Result};

/// External phase shifters on every input and output port, in radians.
///
/// Two unitaries that differ only by such phases give identical photon
/// statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugePhases {
    pub input: Vec<f64>,
    pub output: Vec<f64>,
}

impl GaugePhases {
    /// Wraps every angle into `[0, 2π)`.
    pub fn new(input: Vec<f64>, output: Vec<f64>) -> Result<Self> {
        if input.len() != output.len() {
            return Err(Error::DimensionMismatch {
                expected: input.len(),
                found: output.len(),
            });
        }
        if input.iter().chain(&output).any(|x| !x.is_finite()) {
            return Err(Error::OutOfRange("gauge phases must be finite".into()));
        }
        Ok(Self {
            input: input.into_iter().map(wrap_phase).collect(),
            output: output.into_iter().map(wrap_phase).collect(),
        })
    }

    pub fn trivial(m: usize) -> Self {
        Self {
            input: vec![0.0; m],
            output: vec![0.0; m],
        }
    }

    pub fn modes(&self) -> usize {
        self.input.len()
    }
}

fn phasor(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Returns `D(output) · U · D(input)`.
pub fn apply_gauge(u: &UnitaryMatrix, g: &GaugePhases) -> Result<UnitaryMatrix> {
    let m = u.dim();
    if g.modes() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: g.modes(),
        });
    }
    let out = ComplexMatrix::from_fn(m, m, |r, c| u[(r, c)] * phasor(g.output[r] + g.input[c]));
    Ok(UnitaryMatrix::from_unchecked(out))
}

#[derive(Clone, Copy, Debug)]
pub struct AlignOptions {
    pub max_iterations: usize,
    /// Convergence threshold on the per-sweep fidelity change.
    pub tolerance: f64,
}

impl Default for AlignOptions {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            tolerance: 1e-12,
        }
    }
}

/// Finds the gauge-equivalent of `u` with the highest gate fidelity to
/// `reference`, then fixes the global phase so entry (1,1) is real and
/// non-negative.
pub fn align_gauge(
    u: &UnitaryMatrix,
    reference: &UnitaryMatrix,
) -> Result<(UnitaryMatrix, GaugePhases)> {
    align_gauge_with(u, reference, AlignOptions::default())
}

pub fn align_gauge_with(
    u: &UnitaryMatrix,
    reference: &UnitaryMatrix,
    opts: AlignOptions,
) -> Result<(UnitaryMatrix, GaugePhases)> {
    let m = u.dim();
    if reference.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: reference.dim(),
        });
    }
    // overlap[K][i] = U_Ki conj(R_Ki); Tr(D_o U D_i R†) = Σ e^{i(o_K + in_i)} overlap
    let overlap = ComplexMatrix::from_fn(m, m, |k, i| u[(k, i)] * reference[(k, i)].conj());
    let (mut inp, mut out) = tree_start(&overlap);
    let mut last = f64::NEG_INFINITY;
    let mut converged = false;
    let mut change = f64::INFINITY;
    for _ in 0..opts.max_iterations {
        for (k, o) in out.iter_mut().enumerate() {
            let s: Complex64 = (0..m).map(|i| overlap[(k, i)] * phasor(inp[i])).sum();
            *o = -s.arg();
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (i, p) in inp.iter_mut().enumerate() {
            let s: Complex64 = (0..m).map(|k| overlap[(k, i)] * phasor(out[k])).sum();
            *p = -s.arg();
            total += s.norm();
        }
        let fid = total.re / m as f64;
        change = (fid - last).abs();
        last = fid;
        if change < opts.tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: opts.max_iterations,
            last_change: change,
        });
    }
    let mut gauge = GaugePhases::new(inp, out)?;
    let aligned = apply_gauge(u, &gauge)?;
    let corner = aligned[(0, 0)];
    if corner.norm() > 0.0 {
        let shift = -corner.arg();
        gauge = GaugePhases::new(
            gauge.input,
            gauge.output.iter().map(|o| o + shift).collect(),
        )?;
    }
    Ok((apply_gauge(u, &gauge)?, gauge))
}

/// Starting phases that make the overlap real and positive along a
/// maximum-weight spanning tree of the bipartite output/input graph. Exact
/// for gauge-equivalent pairs; coordinate ascent alone crawls when weak
/// entries are all that couple strong ones.
fn tree_start(overlap: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let m = overlap.rows();
    let mut inp = vec![0.0; m];
    let mut out = vec![0.0; m];
    let mut in_tree = (vec![false; m], vec![false; m]);
    in_tree.1[0] = true;
    for _ in 1..2 * m {
        // heaviest edge between the tree and a node outside it
        let mut best: Option<(f64, usize, usize, bool)> = None;
        for k in 0..m {
            for i in 0..m {
                let new_output = in_tree.1[i] && !in_tree.0[k];
                let new_input = in_tree.0[k] && !in_tree.1[i];
                let w = overlap[(k, i)].norm();
                if (new_output || new_input) && best.is_none_or(|b| w > b.0) {
                    best = Some((w, k, i, new_output));
                }
            }
        }
        let Some((_, k, i, new_output)) = best else {
            break;
        };
        let a = overlap[(k, i)].arg();
        if new_output {
            out[k] = -a - inp[i];
            in_tree.0[k] = true;
        } else {
            inp[i] = -a - out[k];
            in_tree.1[i] = true;
        }
    }
    (inp, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gate_fidelity, haar_sample, seeded_rng};
    use rand::Rng;

    #[test]
    fn zero_gauge_is_identity() {
        let u = haar_sample(4, 3).unwrap();
        assert_eq!(apply_gauge(&u, &GaugePhases::trivial(4)).unwrap(), u);
    }

    #[test]
    fn single_input_phase_on_identity() {
        let g = GaugePhases::new(vec![0.7, 0.0, 0.0], vec![0.0; 3]).unwrap();
        let v = apply_gauge(&UnitaryMatrix::identity(3), &g).unwrap();
        assert!((v[(0, 0)] - Complex64::from_polar(1.0, 0.7)).norm() < 1e-15);
        assert_eq!(v[(1, 1)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn gauge_preserves_moduli() {
        let u = haar_sample(6, 11).unwrap();
        let mut rng = seeded_rng(5);
        let g = GaugePhases::new(
            (0..6).map(|_| rng.random::<f64>() * 7.0).collect(),
            (0..6).map(|_| rng.random::<f64>() * 7.0).collect(),
        )
        .unwrap();
        let v = apply_gauge(&u, &g).unwrap();
        for (a, b) in u.data().iter().zip(v.data()) {
            assert!((a.norm() - b.norm()).abs() <= 1e-15);
        }
    }

    #[test]
    fn phases_are_wrapped() {
        let g = GaugePhases::new(vec![-0.5, 7.0], vec![std::f64::consts::TAU, 0.0]).unwrap();
        assert!(g
            .input
            .iter()
            .chain(&g.output)
            .all(|&x| (0.0..std::f64::consts::TAU).contains(&x)));
        assert!(GaugePhases::new(vec![0.0], vec![]).is_err());
    }

    #[test]
    fn alignment_recovers_gauge_orbit() {
        let mut rng = seeded_rng(21);
        for trial in 0..100 {
            let m = 1 + trial % 8;
            let u = haar_sample(m, 1000 + trial as u64).unwrap();
            let g = GaugePhases::new(
                (0..m).map(|_| rng.random::<f64>() * 6.3).collect(),
                (0..m).map(|_| rng.random::<f64>() * 6.3).collect(),
            )
            .unwrap();
            let moved = apply_gauge(&u, &g).unwrap();
            let (aligned, _) = align_gauge(&moved, &u).unwrap();
            let f = gate_fidelity(&aligned, &u).unwrap();
            assert!(f > 1.0 - 1e-9, "m={m} fidelity {f}");
            assert!(aligned[(0, 0)].im.abs() < 1e-12 && aligned[(0, 0)].re >= 0.0);
        }
    }

    #[test]
    fn self_alignment_keeps_fidelity_one() {
        let u = haar_sample(5, 8).unwrap();
        let (v, _) = align_gauge(&u, &u).unwrap();
        assert!((gate_fidelity(&v, &u).unwrap() - 1.0).abs() < 1e-12);
    }
}
