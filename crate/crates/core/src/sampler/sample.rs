use rand::Rng;

use super::distribution::OutputDistribution;
use super::fock::FockState;
use crate::linalg::seeded_rng;
use crate::{Error, Result};

const NORMALISATION_TOLERANCE: f64 = 1e-9;

/// Draws `shots` i.i.d. outcomes by inverse-CDF over the distribution's
/// canonical outcome order. Collision-free distributions must be
/// [conditioned](OutputDistribution::conditioned) first.
pub fn sample_outcomes(
    dist: &OutputDistribution,
    shots: usize,
    seed: u64,
) -> Result<Vec<FockState>> {
    let total = dist.raw_total();
    if dist.outcomes.is_empty() || (total - 1.0).abs() > NORMALISATION_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "cannot sample from a distribution with total probability {total}"
        )));
    }
    let mut cdf = Vec::with_capacity(dist.outcomes.len());
    let mut acc = 0.0;
    for o in &dist.outcomes {
        acc += o.p;
        cdf.push(acc);
    }
    let last = cdf.len() - 1;
    let mut rng = seeded_rng(seed);
    Ok((0..shots)
        .map(|_| {
            let x: f64 = rng.random::<f64>() * acc;
            let k = cdf.partition_point(|&c| c <= x).min(last);
            dist.outcomes[k].state.clone()
        })
        .collect())
}
