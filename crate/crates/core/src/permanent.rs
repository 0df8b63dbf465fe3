//! Matrix permanents.
//!
//! Ryser's inclusion-exclusion formula with Gray-code subset order is the
//! production kernel, `O(2ⁿ n)`. The permutation sum is kept as a reference
//! for small sizes.

use num_complex::Complex64;

use crate::{ComplexMatrix, Error, Execution, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermanentAlgorithm {
    Naive,
    Ryser,
}

/// Largest matrix sizes accepted by each algorithm. Requests above the cap
/// are refused rather than left to run for hours.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PermanentLimits {
    pub naive_max: usize,
    pub ryser_max: usize,
}

impl Default for PermanentLimits {
    fn default() -> Self {
        Self {
            naive_max: 8,
            ryser_max: 20,
        }
    }
}

/// Below this size Ryser runs on a single thread even in parallel mode.
const PARALLEL_THRESHOLD: usize = 14;

pub fn permanent(a: &ComplexMatrix, algorithm: PermanentAlgorithm) -> Result<Complex64> {
    permanent_with(
        a,
        algorithm,
        PermanentLimits::default(),
        Execution::default(),
    )
}

pub fn permanent_with(
    a: &ComplexMatrix,
    algorithm: PermanentAlgorithm,
    limits: PermanentLimits,
    exec: Execution,
) -> Result<Complex64> {
    if !a.is_square() {
        return Err(Error::InvalidDimension(format!(
            "permanent of a non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    match algorithm {
        PermanentAlgorithm::Naive if n > limits.naive_max => Err(Error::TooLarge {
            n,
            cap: limits.naive_max,
            algorithm: "naive",
        }),
        PermanentAlgorithm::Ryser if n > limits.ryser_max => Err(Error::TooLarge {
            n,
            cap: limits.ryser_max,
            algorithm: "ryser",
        }),
        PermanentAlgorithm::Naive => Ok(naive(a)),
        PermanentAlgorithm::Ryser => Ok(ryser(a, exec)),
    }
}

/// Sum over all permutations, built up column by column.
pub(crate) fn naive(a: &ComplexMatrix) -> Complex64 {
    fn rec(a: &ComplexMatrix, row: usize, used: &mut [bool]) -> Complex64 {
        let n = a.rows();
        if row == n {
            return Complex64::new(1.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..n {
            if !used[c] {
                used[c] = true;
                acc += a[(row, c)] * rec(a, row + 1, used);
                used[c] = false;
            }
        }
        acc
    }
    rec(a, 0, &mut vec![false; a.rows()])
}

/// Ryser's formula
/// `per(A) = (−1)ⁿ Σ_{S ⊆ cols} (−1)^{|S|} Π_i Σ_{j∈S} a_ij`
/// with subsets visited in Gray-code order so each step toggles one column.
pub(crate) fn ryser(a: &ComplexMatrix, exec: Execution) -> Complex64 {
    let n = a.rows();
    match n {
        0 => return Complex64::new(1.0, 0.0),
        1 => return a[(0, 0)],
        2 => return a[(0, 0)] * a[(1, 1)] + a[(0, 1)] * a[(1, 0)],
        _ => {}
    }
    let steps: u64 = (1u64 << n) - 1;
    let total = if exec.is_parallel() && n >= PARALLEL_THRESHOLD {
        let chunks = 64u64;
        let width = steps.div_ceil(chunks);
        exec.map_range(chunks as usize, |c| {
            let start = 1 + c as u64 * width;
            let end = (start + width).min(steps + 1);
            if start >= end {
                Complex64::new(0.0, 0.0)
            } else {
                ryser_span(a, start, end)
            }
        })
        .into_iter()
        .sum()
    } else {
        ryser_span(a, 1, steps + 1)
    };
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

/// Signed Ryser terms for Gray-code indices `start..end` (`start ≥ 1`).
fn ryser_span(a: &ComplexMatrix, start: u64, end: u64) -> Complex64 {
    let n = a.rows();
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let prev = (start - 1) ^ ((start - 1) >> 1);
    for j in 0..n {
        if prev >> j & 1 == 1 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a[(i, j)];
            }
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for k in start..end {
        let j = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        if gray >> j & 1 == 1 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a[(i, j)];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= a[(i, j)];
            }
        }
        let prod: Complex64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    total
}
