//! Recovering an interferometer unitary from one- and two-photon data.
//!
//! Every choice of reference input `i0` and output `k0` gives an analytic
//! candidate ([`reconstruct_candidate`]). With noisy data the `m²`
//! candidates differ; [`reconstruct_best`] projects each onto the unitary
//! group, keeps the one with the lowest χ² and refines it locally.

mod candidate;
mod data;
mod fit;
mod model;

use serde::{Deserialize, Serialize};

pub use candidate::{reconstruct_candidate, REFERENCE_THRESHOLD};
pub use data::{synthesize_data, Measured, MeasurementData, NoiseModel, VisibilityRecord};
pub use fit::{chi2, RefineOptions};

use crate::linalg::{align_gauge, gate_fidelity, similarity};
use crate::sampler::{visibility_tensor, VisibilityTensor};
use crate::{ComplexMatrix, Error, Execution, GaugePhases, Result, UnitaryMatrix};

#[derive(Clone, Debug, Default)]
pub struct ReconstructionOptions {
    /// Unitary to align the result with. It also settles the complex
    /// conjugation that the data cannot resolve. Without it the result is
    /// aligned with its own starting candidate.
    pub reference: Option<UnitaryMatrix>,
    pub refine: RefineOptions,
    pub exec: Execution,
}

/// Outcome of one reference choice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    /// 1-based `(input, output)`.
    pub reference: (usize, usize),
    /// χ² after unitary projection; `None` when the choice was skipped.
    pub chi2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub unitary: UnitaryMatrix,
    pub chi2: f64,
    /// χ² of the selected candidate before refinement.
    pub initial_chi2: f64,
    /// 1-based `(input, output)` reference of the selected candidate.
    pub reference_choice: (usize, usize),
    pub iterations: usize,
    pub chi2_trace: Vec<f64>,
    /// Phases that took the refined unitary onto the alignment target.
    pub gauge: GaugePhases,
    /// Whether the complex conjugate of the fit was taken to match the
    /// reference.
    pub conjugated: bool,
    pub candidates: Vec<CandidateReport>,
}

pub fn reconstruct_best(data: &MeasurementData) -> Result<ReconstructionResult> {
    reconstruct_best_with(data, &ReconstructionOptions::default())
}

pub fn reconstruct_best_with(
    data: &MeasurementData,
    opts: &ReconstructionOptions,
) -> Result<ReconstructionResult> {
    let m = data.modes();
    if let Some(r) = &opts.reference {
        if r.dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: r.dim(),
            });
        }
    }
    let choices: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..m).map(move |k| (i, k))).collect();
    let outcomes = opts.exec.map_slice(&choices, |&(i0, k0)| {
        candidate::candidate_with_clips(data, i0, k0)
            .and_then(|(c, clips)| Ok((UnitaryMatrix::repair(&c)?, clips)))
            .and_then(|(u, clips)| Ok((chi2(&u, data)?, u, clips)))
    });

    let mut best: Option<(f64, usize, UnitaryMatrix, Vec<candidate::Clip>)> = None;
    let mut candidates = Vec::with_capacity(choices.len());
    for (n, (&(i0, k0), outcome)) in choices.iter().zip(outcomes).enumerate() {
        let reference = (i0 + 1, k0 + 1);
        match outcome {
            Ok((value, u, clips)) => {
                candidates.push(CandidateReport {
                    reference,
                    chi2: Some(value),
                    skipped: None,
                });
                if best.as_ref().is_none_or(|b| value < b.0) {
                    best = Some((value, n, u, clips));
                }
            }
            Err(e) => {
                log::info!("reference ({}, {}) skipped: {e}", i0 + 1, k0 + 1);
                candidates.push(CandidateReport {
                    reference,
                    chi2: None,
                    skipped: Some(e.to_string()),
                });
            }
        }
    }
    let Some((initial_chi2, n, start, clips)) = best else {
        return Err(Error::InconsistentData(
            "no usable reference row and column".into(),
        ));
    };
    candidate::warn_clips(&clips);

    let refined = fit::refine(&start, data, &opts.refine);
    let (fit, conjugated) = match &opts.reference {
        Some(r) => {
            let plain = aligned_fidelity(&refined.unitary, r)?;
            let conj = refined.unitary.conj();
            if aligned_fidelity(&conj, r)? > plain {
                (conj, true)
            } else {
                (refined.unitary, false)
            }
        }
        None => (refined.unitary, false),
    };
    let target = opts.reference.as_ref().unwrap_or(&start);
    let (unitary, gauge) = align_gauge(&fit, target)?;
    let chi2_final = chi2(&unitary, data)?;
    Ok(ReconstructionResult {
        unitary,
        chi2: chi2_final,
        initial_chi2,
        reference_choice: (choices[n].0 + 1, choices[n].1 + 1),
        iterations: refined.iterations,
        chi2_trace: refined.trace,
        gauge,
        conjugated,
        candidates,
    })
}

fn aligned_fidelity(u: &UnitaryMatrix, reference: &UnitaryMatrix) -> Result<f64> {
    let (aligned, _) = align_gauge(u, reference)?;
    gate_fidelity(&aligned, reference)
}

/// `1 − Σ|V_a − V_b| / (2n)` over the `n` entries defined in both tensors.
pub fn visibility_similarity(a: &VisibilityTensor, b: &VisibilityTensor) -> Result<f64> {
    if a.modes() != b.modes() {
        return Err(Error::DimensionMismatch {
            expected: a.modes(),
            found: b.modes(),
        });
    }
    let mut n = 0usize;
    let mut total = 0.0;
    for (x, y) in a.entries().iter().zip(b.entries()) {
        if let (Some(va), Some(vb)) = (x.4, y.4) {
            n += 1;
            total += (va - vb).abs();
        }
    }
    if n == 0 {
        return Err(Error::InconsistentData(
            "no visibility defined in both tensors".into(),
        ));
    }
    Ok(1.0 - total / (2.0 * n as f64))
}

/// Mean over inputs of the similarity between measured one-photon output
/// distributions and those predicted by `u`.
pub fn single_photon_similarity(data: &MeasurementData, u: &ComplexMatrix) -> Result<f64> {
    let m = data.modes();
    if u.rows() != m || u.cols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: u.rows(),
        });
    }
    let mut total = 0.0;
    for i in 0..m {
        let measured = normalised(data.single_column(i));
        let predicted = normalised((0..m).map(|k| u[(k, i)].norm_sqr()).collect());
        total += similarity(&measured, &predicted)?;
    }
    Ok(total / m as f64)
}

/// Similarity between measured visibilities and those predicted by `u` at
/// the data's `q`.
pub fn two_photon_similarity(data: &MeasurementData, u: &UnitaryMatrix) -> Result<f64> {
    visibility_similarity(&data.visibility_tensor(), &visibility_tensor(u, data.q())?)
}

fn normalised(v: Vec<f64>) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    v.into_iter().map(|x| x / total).collect()
}
