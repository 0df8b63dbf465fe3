use crate::sampler::MIN_CLASSICAL_COINCIDENCE;
use crate::ComplexMatrix;

/// HOM visibility of a possibly non-unitary transfer matrix, `None` when the
/// classical coincidence probability vanishes.
pub(crate) fn model_visibility(
    u: &ComplexMatrix,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Option<f64> {
    let direct = u[(k, i)] * u[(l, j)];
    let crossed = u[(k, j)] * u[(l, i)];
    let p_cl = direct.norm_sqr() + crossed.norm_sqr();
    if p_cl < MIN_CLASSICAL_COINCIDENCE {
        return None;
    }
    Some(-2.0 * (direct * crossed.conj()).re / p_cl)
}
