use num_complex::Complex64;

use super::data::MeasurementData;
use super::model::model_visibility;
use crate::{ComplexMatrix, Error, Result};

/// Reference one-photon probabilities below this make the reference choice
/// unusable.
pub const REFERENCE_THRESHOLD: f64 = 1e-6;
/// `|cos φ|` up to `1 + CLIP_WARN` is clipped silently, beyond it with a
/// warning.
const CLIP_WARN: f64 = 0.05;
/// `|cos φ|` above `1 + CLIP_ERROR` means the data cannot come from a
/// unitary with this reference.
const CLIP_ERROR: f64 = 0.2;
/// Products of moduli below this carry no phase information.
const NEGLIGIBLE: f64 = 1e-12;
/// Rows with more free signs than this are resolved greedily.
const EXHAUSTIVE_LIMIT: usize = 16;

/// Analytic reconstruction with row `k0` and column `i0` as phase
/// references.
///
/// Moduli come from the one-photon data. Phases of row `k0` and column `i0`
/// are set to zero, which fixes the gauge. Every other phase `φ(K, i)`
/// follows, up to sign, from the visibility with inputs `{i0, i}` and
/// outputs `{k0, K}`:
///
/// `V/q = −2 |U_{k0,i0} U_{K,i} U_{k0,i} U_{K,i0}| cos φ(K,i) / P_cl`.
///
/// Signs are chosen row by row against the visibilities that tie the row to
/// the rows already fixed, then polished by single flips against all
/// visibilities. Data fix the matrix only up to complex conjugation; the
/// first row's most informative phase is taken positive.
///
/// The result is generally not unitary.
pub fn reconstruct_candidate(
    data: &MeasurementData,
    i0: usize,
    k0: usize,
) -> Result<ComplexMatrix> {
    let (u, clips) = candidate_with_clips(data, i0, k0)?;
    warn_clips(&clips);
    Ok(u)
}

/// An entry whose `|cos φ|` exceeded `1 + CLIP_WARN` and was clipped.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Clip {
    pub output: usize,
    pub input: usize,
    pub cos: f64,
}

pub(crate) fn warn_clips(clips: &[Clip]) {
    if let Some(worst) = clips.iter().max_by(|a, b| a.cos.total_cmp(&b.cos)) {
        log::warn!(
            "clipped {} phase(s) with |cos φ| > {}, worst {:.3} at entry ({}, {}); data look inconsistent",
            clips.len(),
            1.0 + CLIP_WARN,
            worst.cos,
            worst.output + 1,
            worst.input + 1
        );
    }
}

/// [`reconstruct_candidate`] without logging; clipped entries are returned.
pub(crate) fn candidate_with_clips(
    data: &MeasurementData,
    i0: usize,
    k0: usize,
) -> Result<(ComplexMatrix, Vec<Clip>)> {
    let m = data.modes();
    if i0 >= m || k0 >= m {
        return Err(Error::OutOfRange(format!(
            "reference ({}, {}) for {m} modes",
            i0 + 1,
            k0 + 1
        )));
    }
    for x in 0..m {
        for (input, output) in [(x, k0), (i0, x)] {
            let p = data.single(input, output).value;
            if p < REFERENCE_THRESHOLD {
                return Err(Error::IllConditionedReference {
                    input,
                    output,
                    value: p,
                });
            }
        }
    }
    let q = data.q();
    if q <= 0.0 {
        return Err(Error::InconsistentData(
            "visibilities measured at q = 0 carry no phase information".into(),
        ));
    }

    let moduli: Vec<f64> = (0..m * m)
        .map(|n| data.single(n % m, n / m).value.max(0.0).sqrt())
        .collect();
    let md = |k: usize, i: usize| moduli[k * m + i];

    // unsigned phases θ(K, i) = arccos(c)
    let mut theta = vec![0.0; m * m];
    let mut clips = Vec::new();
    for k in (0..m).filter(|&k| k != k0) {
        for i in (0..m).filter(|&i| i != i0) {
            let direct = md(k0, i0) * md(k, i);
            let crossed = md(k0, i) * md(k, i0);
            let prod = direct * crossed;
            if prod < NEGLIGIBLE {
                continue;
            }
            let p_cl = direct * direct + crossed * crossed;
            let c = match data.visibility(i0, i, k0, k) {
                Some(v) => -(v.value / q) * p_cl / (2.0 * prod),
                None => 0.0,
            };
            if c.abs() - 1.0 > CLIP_WARN {
                clips.push(Clip {
                    output: k,
                    input: i,
                    cos: c.abs(),
                });
            }
            theta[k * m + i] = clipped_acos(c, i, k)?;
        }
    }

    let mut signs = vec![1.0f64; m * m];
    let build = |signs: &[f64]| {
        ComplexMatrix::from_fn(m, m, |k, i| {
            Complex64::from_polar(md(k, i), signs[k * m + i] * theta[k * m + i])
        })
    };
    let free: Vec<usize> = (0..m).filter(|&i| i != i0).collect();
    let mut fixed = vec![k0];
    let mut first = true;
    for k in (0..m).filter(|&k| k != k0) {
        let score = |signs: &[f64]| -> f64 {
            let u = build(signs);
            fixed
                .iter()
                .map(|&l| pair_rows_misfit(&u, data, k, l))
                .sum()
        };
        // in the first row only relative signs are observable
        let pinned = if first {
            free.iter()
                .copied()
                .max_by(|&a, &b| theta[k * m + a].sin().total_cmp(&theta[k * m + b].sin()))
        } else {
            None
        };
        let open: Vec<usize> = free
            .iter()
            .copied()
            .filter(|&i| Some(i) != pinned)
            .collect();
        if open.len() <= EXHAUSTIVE_LIMIT {
            let mut best = (f64::INFINITY, 0u64);
            for pattern in 0..(1u64 << open.len()) {
                for (b, &i) in open.iter().enumerate() {
                    signs[k * m + i] = if pattern >> b & 1 == 1 { -1.0 } else { 1.0 };
                }
                let s = score(&signs);
                if s < best.0 {
                    best = (s, pattern);
                }
            }
            for (b, &i) in open.iter().enumerate() {
                signs[k * m + i] = if best.1 >> b & 1 == 1 { -1.0 } else { 1.0 };
            }
        } else {
            greedy_flips(&mut signs, open.iter().map(|&i| k * m + i).collect(), score);
        }
        fixed.push(k);
        first = false;
    }

    let all: Vec<usize> = (0..m)
        .filter(|&k| k != k0)
        .flat_map(|k| free.iter().map(move |&i| k * m + i))
        .collect();
    greedy_flips(&mut signs, all, |s| visibility_misfit(&build(s), data));
    Ok((build(&signs), clips))
}

fn clipped_acos(c: f64, i: usize, k: usize) -> Result<f64> {
    let excess = c.abs() - 1.0;
    if excess > CLIP_ERROR {
        return Err(Error::InconsistentData(format!(
            "phase of entry ({}, {}) needs |cos φ| = {:.3}",
            k + 1,
            i + 1,
            c.abs()
        )));
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// Single sign flips while any of them lowers `score`.
fn greedy_flips(signs: &mut [f64], slots: Vec<usize>, score: impl Fn(&[f64]) -> f64) {
    let mut current = score(signs);
    for _ in 0..10 {
        let mut improved = false;
        for &s in &slots {
            signs[s] = -signs[s];
            let trial = score(signs);
            if trial < current - 1e-15 * current.abs() {
                current = trial;
                improved = true;
            } else {
                signs[s] = -signs[s];
            }
        }
        if !improved {
            break;
        }
    }
}

/// Weighted visibility misfit over experiments whose outputs are rows `k`
/// and `l`.
fn pair_rows_misfit(u: &ComplexMatrix, data: &MeasurementData, k: usize, l: usize) -> f64 {
    let m = data.modes();
    let q = data.q();
    let mut total = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            if let Some(v) = data.visibility(i, j, k, l) {
                let model = q * model_visibility(u, i, j, k, l).unwrap_or(0.0);
                total += ((model - v.value) / v.sigma).powi(2);
            }
        }
    }
    total
}

fn visibility_misfit(u: &ComplexMatrix, data: &MeasurementData) -> f64 {
    let q = data.q();
    data.visibility_records()
        .iter()
        .map(|r| {
            let model = q * model_visibility(u, r.i, r.j, r.k, r.l).unwrap_or(0.0);
            ((model - r.v.value) / r.v.sigma).powi(2)
        })
        .sum()
}
