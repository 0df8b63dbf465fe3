//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use bosim::{Complex64, FockState, UnitaryMatrix};

type Polynomial = HashMap<Vec<usize>, Complex64>;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Output amplitudes of `input` by expanding `Π_i (Σ_K U_{K,i} a†_K)^{s_i}`
/// over creation operators, with photons tagged by an internal label:
/// photon `p` enters mode `inputs[p].0` carrying label `inputs[p].1`.
/// Keys are occupations of `(mode, label)` slots, `label·m + mode`.
fn expand(u: &UnitaryMatrix, inputs: &[(usize, usize)], labels: usize) -> Polynomial {
    let m = u.dim();
    let mut poly: Polynomial = HashMap::new();
    poly.insert(vec![0; m * labels], Complex64::new(1.0, 0.0));
    for &(mode, label) in inputs {
        let mut next: Polynomial = HashMap::new();
        for (mono, coeff) in &poly {
            for k in 0..m {
                let mut key = mono.clone();
                key[label * m + k] += 1;
                *next.entry(key).or_insert(Complex64::new(0.0, 0.0)) += coeff * u[(k, mode)];
            }
        }
        poly = next;
    }
    // a†^t |0> = √t! |t>, and the input normalisation 1/√(Π s!)
    let mut input_slots = vec![0usize; m * labels];
    for &(mode, label) in inputs {
        input_slots[label * m + mode] += 1;
    }
    let norm: f64 = input_slots
        .iter()
        .map(|&s| factorial(s))
        .product::<f64>()
        .sqrt();
    poly.into_iter()
        .map(|(mono, c)| {
            let out_norm: f64 = mono.iter().map(|&t| factorial(t)).product::<f64>().sqrt();
            (mono, c * out_norm / norm)
        })
        .collect()
}

/// `|⟨T|U_F|S⟩|²` from the creation-operator expansion.
pub fn fock_probability(u: &UnitaryMatrix, input: &FockState, output: &FockState) -> f64 {
    let inputs: Vec<(usize, usize)> = input.mode_list().into_iter().map(|k| (k, 0)).collect();
    let amps = expand(u, &inputs, 1);
    amps.get(output.occupations()).map_or(0.0, |a| a.norm_sqr())
}

/// Three-photon probability with the photon in `odd` carrying an orthogonal
/// internal state, summed over the internal labels of the detected photons.
pub fn distinguishable_odd_probability(
    u: &UnitaryMatrix,
    pair: (usize, usize),
    odd: usize,
    output: &FockState,
) -> f64 {
    let m = u.dim();
    let amps = expand(u, &[(pair.0, 0), (pair.1, 0), (odd, 1)], 2);
    amps.iter()
        .filter(|(mono, _)| (0..m).all(|k| mono[k] + mono[m + k] == output.occupations()[k]))
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Trapezoid rule on `n` equal panels.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + h * k as f64)).sum();
    h * (0.5 * f(a) + inner + 0.5 * f(b))
}
