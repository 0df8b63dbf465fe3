use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fock::{binomial, collision_free_states, enumerate_states, FockState};
use crate::permanent::{self, PermanentLimits};
use crate::{ComplexMatrix, Error, Execution, Result, UnitaryMatrix};

/// Which photon model produced a distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    /// Fully indistinguishable photons.
    Quantum,
    /// Fully distinguishable photons (no interference).
    Classical,
    /// Two-term mixture weighted by `r` (see [`super::three_photon_partial_distribution`]).
    Partial { r: f64 },
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Quantum => write!(f, "quantum"),
            Model::Classical => write!(f, "classical"),
            Model::Partial { r } => write!(f, "partial:{r}"),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "quantum" | "indistinguishable" => Ok(Model::Quantum),
            "classical" | "distinguishable" => Ok(Model::Classical),
            other => {
                let r = other
                    .strip_prefix("partial:")
                    .and_then(|r| r.parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse {
                        line: 1,
                        message: format!("unknown model {other:?}"),
                    })?;
                if !(0.0..=1.0).contains(&r) {
                    return Err(Error::OutOfRange(format!(
                        "partial model weight {r} outside [0, 1]"
                    )));
                }
                Ok(Model::Partial { r })
            }
        }
    }
}

impl Serialize for Model {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    All,
    CollisionFree,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub state: FockState,
    pub p: f64,
}

/// Exact output probabilities for one input state.
///
/// With [`Restriction::CollisionFree`] the outcomes carry their raw
/// probabilities, so [`OutputDistribution::raw_total`] is the probability of
/// a collision-free event and [`OutputDistribution::conditional`] gives the
/// renormalised values. Renormalisation never happens implicitly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "DistributionFile", try_from = "DistributionFile")]
pub struct OutputDistribution {
    pub input: FockState,
    pub model: Model,
    pub restriction: Restriction,
    pub outcomes: Vec<Outcome>,
    pub seed: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct DistributionFile {
    input: FockState,
    model: Model,
    restrict: Restriction,
    raw_total: f64,
    outcomes: Vec<OutcomeRecord>,
    seed: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct OutcomeRecord {
    state: FockState,
    p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p_conditional: Option<f64>,
}

impl From<OutputDistribution> for DistributionFile {
    fn from(d: OutputDistribution) -> Self {
        let conditional = (d.restriction == Restriction::CollisionFree).then(|| d.conditional());
        let raw_total = d.raw_total();
        let outcomes = d
            .outcomes
            .into_iter()
            .enumerate()
            .map(|(k, o)| OutcomeRecord {
                state: o.state,
                p: o.p,
                p_conditional: conditional.as_ref().map(|c| c[k]),
            })
            .collect();
        DistributionFile {
            input: d.input,
            model: d.model,
            restrict: d.restriction,
            raw_total,
            outcomes,
            seed: d.seed,
        }
    }
}

impl TryFrom<DistributionFile> for OutputDistribution {
    type Error = Error;

    fn try_from(f: DistributionFile) -> Result<Self> {
        let m = f.input.modes();
        if let Some(bad) = f.outcomes.iter().find(|o| o.state.modes() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: bad.state.modes(),
            });
        }
        if let Some(bad) = f.outcomes.iter().find(|o| !(o.p.is_finite() && o.p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!(
                "probability {} for {}",
                bad.p, bad.state
            )));
        }
        Ok(OutputDistribution {
            input: f.input,
            model: f.model,
            restriction: f.restrict,
            outcomes: f
                .outcomes
                .into_iter()
                .map(|o| Outcome {
                    state: o.state,
                    p: o.p,
                })
                .collect(),
            seed: f.seed,
        })
    }
}

impl OutputDistribution {
    pub fn modes(&self) -> usize {
        self.input.modes()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.p).collect()
    }

    /// Total probability of the listed outcomes.
    pub fn raw_total(&self) -> f64 {
        self.outcomes.iter().map(|o| o.p).sum()
    }

    /// Probabilities renormalised over the listed outcomes.
    pub fn conditional(&self) -> Vec<f64> {
        let total = self.raw_total();
        self.outcomes
            .iter()
            .map(|o| if total > 0.0 { o.p / total } else { 0.0 })
            .collect()
    }

    /// Copy of the distribution with the conditional probabilities in place
    /// of the raw ones.
    pub fn conditioned(&self) -> OutputDistribution {
        let cond = self.conditional();
        let mut out = self.clone();
        for (o, p) in out.outcomes.iter_mut().zip(cond) {
            o.p = p;
        }
        out
    }

    pub fn probability_of(&self, state: &FockState) -> Option<f64> {
        self.outcomes
            .binary_search_by(|o| o.state.cmp(state))
            .ok()
            .map(|k| self.outcomes[k].p)
    }

    /// One row per outcome: `state,p` plus `p_conditional` for collision-free
    /// distributions.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let collision_free = self.restriction == Restriction::CollisionFree;
        if collision_free {
            wtr.write_record(["state", "p", "p_conditional"])?;
        } else {
            wtr.write_record(["state", "p"])?;
        }
        let cond = self.conditional();
        for (o, c) in self.outcomes.iter().zip(cond) {
            if collision_free {
                wtr.write_record([o.state.to_string(), o.p.to_string(), c.to_string()])?;
            } else {
                wtr.write_record([o.state.to_string(), o.p.to_string()])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Limits and execution strategy for distribution builders.
#[derive(Clone, Copy, Debug)]
pub struct SamplerOptions {
    pub limits: PermanentLimits,
    /// Refuse to enumerate more outcomes than this.
    pub max_outcomes: u128,
    pub exec: Execution,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        Self {
            limits: PermanentLimits::default(),
            max_outcomes: 2_000_000,
            exec: Execution::default(),
        }
    }
}

fn check_states(u: &UnitaryMatrix, input: &FockState, output: &FockState) -> Result<()> {
    let m = u.dim();
    for s in [input, output] {
        if s.modes() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: s.modes(),
            });
        }
    }
    if input.photons() != output.photons() {
        return Err(Error::PhotonNumberMismatch {
            input: input.photons(),
            output: output.photons(),
        });
    }
    Ok(())
}

/// `U_{S,T}`: column `i` of `U` repeated `s_i` times and row `j` repeated
/// `t_j` times.
pub fn build_submatrix(
    u: &UnitaryMatrix,
    input: &FockState,
    output: &FockState,
) -> Result<ComplexMatrix> {
    check_states(u, input, output)?;
    if input.photons() == 0 {
        return Err(Error::InvalidDimension(
            "sub-matrix of a vacuum transition".into(),
        ));
    }
    Ok(submatrix_unchecked(
        u,
        &input.mode_list(),
        &output.mode_list(),
    ))
}

fn submatrix_unchecked(u: &ComplexMatrix, cols: &[usize], rows: &[usize]) -> ComplexMatrix {
    let n = cols.len();
    ComplexMatrix::from_fn(n, n, |r, c| u[(rows[r], cols[c])])
}

/// `|per(U_{S,T})|² / (Π s_i! Π t_j!)`
pub fn output_probability(u: &UnitaryMatrix, input: &FockState, output: &FockState) -> Result<f64> {
    check_states(u, input, output)?;
    let n = input.photons();
    if n == 0 {
        return Ok(1.0);
    }
    let limits = PermanentLimits::default();
    if n > limits.ryser_max {
        return Err(Error::TooLarge {
            n,
            cap: limits.ryser_max,
            algorithm: "ryser",
        });
    }
    Ok(quantum_probability(
        u,
        &input.mode_list(),
        input.factorial_product(),
        output,
    ))
}

pub(crate) fn quantum_probability(
    u: &ComplexMatrix,
    cols: &[usize],
    in_fact: f64,
    output: &FockState,
) -> f64 {
    let sub = submatrix_unchecked(u, cols, &output.mode_list());
    let per = permanent::ryser(&sub, Execution::Sequential);
    per.norm_sqr() / (in_fact * output.factorial_product())
}

fn classical_probability(u: &ComplexMatrix, cols: &[usize], output: &FockState) -> f64 {
    let sub = submatrix_unchecked(u, cols, &output.mode_list());
    let n = sub.rows();
    let weights = ComplexMatrix::from_fn(n, n, |r, c| Complex64::new(sub[(r, c)].norm_sqr(), 0.0));
    permanent::ryser(&weights, Execution::Sequential).re / output.factorial_product()
}

pub(crate) fn outcome_space(
    m: usize,
    n: usize,
    restrict: Restriction,
    opts: &SamplerOptions,
) -> Result<Vec<FockState>> {
    if n > opts.limits.ryser_max {
        return Err(Error::TooLarge {
            n,
            cap: opts.limits.ryser_max,
            algorithm: "ryser",
        });
    }
    let count = match restrict {
        Restriction::All => binomial(m + n - 1, n),
        Restriction::CollisionFree => binomial(m, n),
    };
    if count > opts.max_outcomes {
        return Err(Error::TooLarge {
            n: count.min(usize::MAX as u128) as usize,
            cap: opts.max_outcomes.min(usize::MAX as u128) as usize,
            algorithm: "outcome enumeration",
        });
    }
    Ok(match restrict {
        Restriction::All => enumerate_states(m, n),
        Restriction::CollisionFree => collision_free_states(m, n),
    })
}

pub fn full_distribution(
    u: &UnitaryMatrix,
    input: &FockState,
    restrict: Restriction,
) -> Result<OutputDistribution> {
    full_distribution_with(u, input, restrict, &SamplerOptions::default())
}

/// Enumerates every outcome in canonical order. Probabilities are evaluated
/// independently per outcome, so the parallel and sequential paths give
/// identical results.
pub fn full_distribution_with(
    u: &UnitaryMatrix,
    input: &FockState,
    restrict: Restriction,
    opts: &SamplerOptions,
) -> Result<OutputDistribution> {
    let m = u.dim();
    if input.modes() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: input.modes(),
        });
    }
    let n = input.photons();
    let states = outcome_space(m, n, restrict, opts)?;
    let cols = input.mode_list();
    let in_fact = input.factorial_product();
    let probs = opts.exec.map_slice(&states, |t| {
        if n == 0 {
            1.0
        } else {
            quantum_probability(u, &cols, in_fact, t)
        }
    });
    Ok(assemble(input, Model::Quantum, restrict, states, probs))
}

pub fn classical_distribution(
    u: &UnitaryMatrix,
    input: &FockState,
    restrict: Restriction,
) -> Result<OutputDistribution> {
    classical_distribution_with(u, input, restrict, &SamplerOptions::default())
}

/// Fully distinguishable photons: `P(T) = per(|U_{S,T}|²) / Π t_j!`, i.e.
/// every photon is routed independently.
pub fn classical_distribution_with(
    u: &UnitaryMatrix,
    input: &FockState,
    restrict: Restriction,
    opts: &SamplerOptions,
) -> Result<OutputDistribution> {
    let m = u.dim();
    if input.modes() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: input.modes(),
        });
    }
    if !input.is_collision_free() {
        return Err(Error::Unsupported(format!(
            "distinguishable-photon model needs a collision-free input, got {input}"
        )));
    }
    let n = input.photons();
    let states = outcome_space(m, n, restrict, opts)?;
    let cols = input.mode_list();
    let probs = opts.exec.map_slice(&states, |t| {
        if n == 0 {
            1.0
        } else {
            classical_probability(u, &cols, t)
        }
    });
    Ok(assemble(input, Model::Classical, restrict, states, probs))
}

pub(crate) fn assemble(
    input: &FockState,
    model: Model,
    restriction: Restriction,
    states: Vec<FockState>,
    probs: Vec<f64>,
) -> OutputDistribution {
    OutputDistribution {
        input: input.clone(),
        model,
        restriction,
        outcomes: states
            .into_iter()
            .zip(probs)
            .map(|(state, p)| Outcome { state, p })
            .collect(),
        seed: None,
    }
}
