use super::distribution::{
    assemble, outcome_space, quantum_probability, Model, OutputDistribution, Restriction,
    SamplerOptions,
};
use super::fock::FockState;
use crate::{Error, Result, UnitaryMatrix};

/// Input modes for the three-photon partial-distinguishability model: two
/// mutually indistinguishable photons in `pair` and one photon in `odd` that
/// may be distinguishable from them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhotonRoles {
    pub pair: (usize, usize),
    pub odd: usize,
}

impl PhotonRoles {
    /// First and last mode form the pair, the middle mode carries the odd
    /// photon (modes 1, 5 and 3 for five modes).
    pub fn standard(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidDimension(format!(
                "three photons need at least 3 modes, got {m}"
            )));
        }
        Ok(Self {
            pair: (0, m - 1),
            odd: m / 2,
        })
    }

    fn validate(&self, m: usize) -> Result<()> {
        let (a, b) = self.pair;
        let all = [a, b, self.odd];
        if all.iter().any(|&x| x >= m) {
            return Err(Error::OutOfRange(format!("photon role outside 0..{m}")));
        }
        if a == b || a == self.odd || b == self.odd {
            return Err(Error::InvalidDimension(
                "photon roles must use three distinct modes".into(),
            ));
        }
        Ok(())
    }

    pub fn input_state(&self, m: usize) -> Result<FockState> {
        self.validate(m)?;
        FockState::from_modes(m, &[self.pair.0, self.pair.1, self.odd])
    }
}

/// Collision-free three-photon distribution for the mixed state
/// `r·|indistinguishable⟩ + (1−r)·|odd photon distinguishable⟩`.
///
/// In the distinguishable branch the odd photon is routed on its own and
/// the pair interferes in the remaining two output modes:
/// `P_mixed(T) = Σ_{x∈T} |U_{x,odd}|² · P_pair(T∖x)`.
pub fn three_photon_partial_distribution(u: &UnitaryMatrix, r: f64) -> Result<OutputDistribution> {
    three_photon_partial_distribution_with(
        u,
        PhotonRoles::standard(u.dim())?,
        r,
        &SamplerOptions::default(),
    )
}

pub fn three_photon_partial_distribution_with(
    u: &UnitaryMatrix,
    roles: PhotonRoles,
    r: f64,
    opts: &SamplerOptions,
) -> Result<OutputDistribution> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange(format!(
            "indistinguishable weight {r} outside [0, 1]"
        )));
    }
    let m = u.dim();
    let input = roles.input_state(m)?;
    let states = outcome_space(m, 3, Restriction::CollisionFree, opts)?;
    let cols = input.mode_list();
    let pair_cols = [
        roles.pair.0.min(roles.pair.1),
        roles.pair.0.max(roles.pair.1),
    ];
    let probs = opts.exec.map_slice(&states, |t| {
        let indist = quantum_probability(u, &cols, 1.0, t);
        let outs = t.mode_list();
        let mut mixed = 0.0;
        for x in 0..3 {
            let rest: Vec<usize> = outs
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != x)
                .map(|(_, &o)| o)
                .collect();
            // rest has distinct modes, so the pair term needs no extra factorials
            let a = u[(rest[0], pair_cols[0])] * u[(rest[1], pair_cols[1])]
                + u[(rest[0], pair_cols[1])] * u[(rest[1], pair_cols[0])];
            mixed += u[(outs[x], roles.odd)].norm_sqr() * a.norm_sqr();
        }
        r * indist + (1.0 - r) * mixed
    });
    Ok(assemble(
        &input,
        Model::Partial { r },
        Restriction::CollisionFree,
        states,
        probs,
    ))
}
