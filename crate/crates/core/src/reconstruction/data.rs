use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::linalg::seeded_rng;
use crate::sampler::{
    coincidence_probabilities, mode_pairs, pair_index, VisibilityTensor, MIN_CLASSICAL_COINCIDENCE,
};
use crate::{Error, Result, UnitaryMatrix};

/// A measured value and its one-sigma uncertainty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measured {
    pub value: f64,
    pub sigma: f64,
}

impl Measured {
    pub fn new(value: f64, sigma: f64) -> Self {
        Self { value, sigma }
    }
}

/// One two-photon visibility measurement (0-based modes).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VisibilityRecord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub v: Measured,
}

/// One-photon output probabilities and two-photon HOM visibilities of an
/// `m`-mode device, with the two-photon indistinguishability `q` that the
/// visibilities were measured at.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementData {
    m: usize,
    q: f64,
    /// `P¹(i, K)` stored at `i·m + K`.
    single: Vec<Measured>,
    /// Indexed by `(input pair, output pair)` as in [`VisibilityTensor`].
    visibility: Vec<Option<Measured>>,
}

/// Columns of the one-photon matrix must sum to one within this (or within
/// their stated uncertainty, whichever is larger).
const COLUMN_SUM_TOLERANCE: f64 = 1e-6;

impl MeasurementData {
    /// `single_photon[i·m + K]` is the probability that a photon entering
    /// mode `i` leaves in mode `K`.
    pub fn new(
        m: usize,
        q: f64,
        single_photon: Vec<Measured>,
        visibilities: &[VisibilityRecord],
    ) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidDimension(format!(
                "measurement data need at least 2 modes, got {m}"
            )));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::OutOfRange(format!(
                "indistinguishability {q} outside [0, 1]"
            )));
        }
        if single_photon.len() != m * m {
            return Err(Error::DimensionMismatch {
                expected: m * m,
                found: single_photon.len(),
            });
        }
        for (n, s) in single_photon.iter().enumerate() {
            if !(s.value.is_finite() && s.value >= 0.0) {
                return Err(Error::InconsistentData(format!(
                    "single-photon probability ({}, {}) = {}",
                    n / m + 1,
                    n % m + 1,
                    s.value
                )));
            }
            check_sigma(s.sigma)?;
        }
        for i in 0..m {
            let col = &single_photon[i * m..(i + 1) * m];
            let total: f64 = col.iter().map(|s| s.value).sum();
            let spread: f64 = col.iter().map(|s| s.sigma * s.sigma).sum::<f64>().sqrt();
            if (total - 1.0).abs() > COLUMN_SUM_TOLERANCE.max(3.0 * spread) {
                return Err(Error::InconsistentData(format!(
                    "single-photon probabilities for input {} sum to {total}",
                    i + 1
                )));
            }
        }
        let pairs = m * (m - 1) / 2;
        let mut visibility = vec![None; pairs * pairs];
        for r in visibilities {
            if r.i == r.j || r.k == r.l || [r.i, r.j, r.k, r.l].iter().any(|&x| x >= m) {
                return Err(Error::OutOfRange(format!(
                    "visibility ({},{};{},{}) for {m} modes",
                    r.i + 1,
                    r.j + 1,
                    r.k + 1,
                    r.l + 1
                )));
            }
            if !r.v.value.is_finite() {
                return Err(Error::InconsistentData("non-finite visibility".into()));
            }
            check_sigma(r.v.sigma)?;
            visibility[pair_index(m, r.i, r.j) * pairs + pair_index(m, r.k, r.l)] = Some(r.v);
        }
        Ok(Self {
            m,
            q,
            single: single_photon,
            visibility,
        })
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `P¹(i, K)`.
    pub fn single(&self, i: usize, k: usize) -> Measured {
        self.single[i * self.m + k]
    }

    /// Output distribution of a photon entering mode `i`.
    pub fn single_column(&self, i: usize) -> Vec<f64> {
        (0..self.m).map(|k| self.single(i, k).value).collect()
    }

    pub fn visibility(&self, i: usize, j: usize, k: usize, l: usize) -> Option<Measured> {
        let m = self.m;
        if i == j || k == l || [i, j, k, l].iter().any(|&x| x >= m) {
            return None;
        }
        let pairs = m * (m - 1) / 2;
        self.visibility[pair_index(m, i, j) * pairs + pair_index(m, k, l)]
    }

    /// All present visibilities with `i < j`, `k < l`.
    pub fn visibility_records(&self) -> Vec<VisibilityRecord> {
        let pairs = mode_pairs(self.m);
        let mut out = Vec::new();
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                if let Some(v) = self.visibility[a * pairs.len() + b] {
                    out.push(VisibilityRecord { i, j, k, l, v });
                }
            }
        }
        out
    }

    /// Measured visibilities without uncertainties.
    pub fn visibility_tensor(&self) -> VisibilityTensor {
        let mut t = VisibilityTensor::empty(self.m);
        for r in self.visibility_records() {
            t.set(r.i, r.j, r.k, r.l, Some(r.v.value))
                .expect("indices checked on construction");
        }
        t
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InconsistentData(format!(
            "uncertainty {sigma} must be positive"
        )));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct DataFile {
    m: usize,
    q: f64,
    single_photon: Vec<[f64; 2]>,
    visibilities: Vec<VisibilityEntry>,
}

#[derive(Serialize, Deserialize)]
struct VisibilityEntry {
    i: usize,
    j: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "L")]
    l: usize,
    v: f64,
    sigma: f64,
}

/// JSON: `single_photon` is row-major over (input, output); modes in
/// `visibilities` are 1-based.
impl Serialize for MeasurementData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DataFile {
            m: self.m,
            q: self.q,
            single_photon: self.single.iter().map(|x| [x.value, x.sigma]).collect(),
            visibilities: self
                .visibility_records()
                .into_iter()
                .map(|r| VisibilityEntry {
                    i: r.i + 1,
                    j: r.j + 1,
                    k: r.k + 1,
                    l: r.l + 1,
                    v: r.v.value,
                    sigma: r.v.sigma,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MeasurementData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let f = DataFile::deserialize(d)?;
        let mut records = Vec::with_capacity(f.visibilities.len());
        for e in f.visibilities {
            if [e.i, e.j, e.k, e.l].contains(&0) {
                return Err(D::Error::custom("visibility mode labels are 1-based"));
            }
            records.push(VisibilityRecord {
                i: e.i - 1,
                j: e.j - 1,
                k: e.k - 1,
                l: e.l - 1,
                v: Measured::new(e.v, e.sigma),
            });
        }
        let single = f
            .single_photon
            .iter()
            .map(|&[p, s]| Measured::new(p, s))
            .collect();
        MeasurementData::new(f.m, f.q, single, &records).map_err(D::Error::custom)
    }
}

/// Noise added by [`synthesize_data`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    /// Exact model values; every uncertainty is 1.
    None,
    /// Each value multiplied by `1 + relative_sigma·N(0,1)`; one-photon
    /// columns are renormalised afterwards.
    Gaussian { relative_sigma: f64 },
    /// Photon counting with `shots` events per input (one-photon) or per
    /// setting (two-photon).
    Poisson { shots: u64 },
}

/// Uncertainty floor relative to the Gaussian noise level, so that tiny
/// model values do not get near-zero σ.
const SIGMA_FLOOR: f64 = 1e-2;

/// Simulated measurement of `u`: one-photon probabilities `|U_{K,i}|²` and
/// `q`-degraded visibilities for every input and output pair.
pub fn synthesize_data(
    u: &UnitaryMatrix,
    q: f64,
    noise: NoiseModel,
    seed: u64,
) -> Result<MeasurementData> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::OutOfRange(format!(
            "indistinguishability {q} outside [0, 1]"
        )));
    }
    let m = u.dim();
    let mut rng = seeded_rng(seed);
    let exact_single: Vec<f64> = (0..m * m).map(|n| u[(n % m, n / m)].norm_sqr()).collect();

    let single = match noise {
        NoiseModel::None => exact_single
            .iter()
            .map(|&p| Measured::new(p, 1.0))
            .collect(),
        NoiseModel::Gaussian { relative_sigma } => {
            let normal = gaussian(relative_sigma)?;
            let mut out = Vec::with_capacity(m * m);
            for i in 0..m {
                let noisy: Vec<f64> = exact_single[i * m..(i + 1) * m]
                    .iter()
                    .map(|&p| (p * (1.0 + normal.sample(&mut rng))).max(0.0))
                    .collect();
                let total: f64 = noisy.iter().sum();
                for &p in &noisy {
                    let p = if total > 0.0 {
                        p / total
                    } else {
                        1.0 / m as f64
                    };
                    let sigma = (relative_sigma * p).max(relative_sigma * SIGMA_FLOOR);
                    out.push(Measured::new(p, sigma));
                }
            }
            out
        }
        NoiseModel::Poisson { shots } => {
            check_shots(shots)?;
            let n = shots as f64;
            let mut out = Vec::with_capacity(m * m);
            for i in 0..m {
                let counts: Vec<f64> = exact_single[i * m..(i + 1) * m]
                    .iter()
                    .map(|&p| poisson(&mut rng, n * p))
                    .collect();
                let total: f64 = counts.iter().sum();
                for &c in &counts {
                    let p = if total > 0.0 {
                        c / total
                    } else {
                        1.0 / m as f64
                    };
                    let sigma = c.max(1.0).sqrt() / total.max(1.0);
                    out.push(Measured::new(p, sigma));
                }
            }
            out
        }
    };

    let mut records = Vec::new();
    let normal = match noise {
        NoiseModel::Gaussian { relative_sigma } => Some(gaussian(relative_sigma)?),
        _ => None,
    };
    for &(i, j) in &mode_pairs(m) {
        for &(k, l) in &mode_pairs(m) {
            let (p_cl, p_q) = coincidence_probabilities(u, i, j, k, l)?;
            if p_cl < MIN_CLASSICAL_COINCIDENCE {
                continue;
            }
            let v = q * (p_cl - p_q) / p_cl;
            let measured = match noise {
                NoiseModel::None => Some(Measured::new(v, 1.0)),
                NoiseModel::Gaussian { relative_sigma } => {
                    let noisy = v * (1.0 + normal.as_ref().expect("set above").sample(&mut rng));
                    let sigma = (relative_sigma * v.abs()).max(relative_sigma * SIGMA_FLOOR);
                    Some(Measured::new(noisy, sigma))
                }
                NoiseModel::Poisson { shots } => {
                    let n = shots as f64;
                    let partial = q * p_q + (1.0 - q) * p_cl;
                    let n_cl = poisson(&mut rng, n * p_cl);
                    let n_q = poisson(&mut rng, n * partial);
                    (n_cl > 0.0).then(|| {
                        let ratio = n_q / n_cl;
                        let sigma = ratio * (1.0 / n_q.max(1.0) + 1.0 / n_cl).sqrt();
                        Measured::new(1.0 - ratio, sigma.max(1.0 / n_cl))
                    })
                }
            };
            if let Some(v) = measured {
                records.push(VisibilityRecord { i, j, k, l, v });
            }
        }
    }
    MeasurementData::new(m, q, single, &records)
}

fn gaussian(relative_sigma: f64) -> Result<Normal<f64>> {
    if !(relative_sigma.is_finite() && relative_sigma > 0.0) {
        return Err(Error::OutOfRange(format!(
            "relative noise {relative_sigma} must be positive"
        )));
    }
    Normal::new(0.0, relative_sigma).map_err(|e| Error::OutOfRange(e.to_string()))
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(Error::OutOfRange(
            "Poisson noise needs at least one shot".into(),
        ));
    }
    Ok(())
}

fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    Poisson::new(mean).map(|p| p.sample(rng)).unwrap_or(mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_sample;
    use crate::sampler::visibility_tensor;

    #[test]
    fn exact_data() {
        let u = haar_sample(4, 1).unwrap();
        let d = synthesize_data(&u, 1.0, NoiseModel::None, 0).unwrap();
        assert_eq!(d.single(2, 3).value, u[(3, 2)].norm_sqr());
        assert_eq!(d.visibility_tensor(), visibility_tensor(&u, 1.0).unwrap());
        let d95 = synthesize_data(&u, 0.95, NoiseModel::None, 0).unwrap();
        for (a, b) in d.visibility_records().iter().zip(d95.visibility_records()) {
            assert!((0.95 * a.v.value - b.v.value).abs() < 1e-15);
        }
    }

    #[test]
    fn poisson_errors_scale_with_shots() {
        let u = haar_sample(5, 2).unwrap();
        let d = synthesize_data(&u, 1.0, NoiseModel::Poisson { shots: 10_000 }, 3).unwrap();
        for i in 0..5 {
            for k in 0..5 {
                let p = u[(k, i)].norm_sqr();
                let got = d.single(i, k);
                if p > 0.1 {
                    let rel = (got.value - p).abs() / p;
                    assert!(rel < 5.0 / (10_000.0 * p).sqrt(), "{rel}");
                    assert!((got.sigma - (p / 10_000.0).sqrt()).abs() < 0.2 * got.sigma);
                }
            }
        }
    }

    #[test]
    fn gaussian_noise_keeps_columns_normalised() {
        let u = haar_sample(5, 2).unwrap();
        let d = synthesize_data(
            &u,
            0.9,
            NoiseModel::Gaussian {
                relative_sigma: 0.05,
            },
            3,
        )
        .unwrap();
        for i in 0..5 {
            assert!((d.single_column(i).iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(synthesize_data(
            &u,
            0.9,
            NoiseModel::Gaussian {
                relative_sigma: -1.0
            },
            3
        )
        .is_err());
        assert!(synthesize_data(&u, 0.9, NoiseModel::Poisson { shots: 0 }, 3).is_err());
        assert!(synthesize_data(&u, 1.5, NoiseModel::None, 3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let u = haar_sample(3, 5).unwrap();
        let d = synthesize_data(&u, 0.95, NoiseModel::Poisson { shots: 1000 }, 1).unwrap();
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["single_photon"].as_array().unwrap().len(), 9);
        assert!(json["visibilities"][0]["K"].as_u64().unwrap() >= 1);
        let back: MeasurementData = serde_json::from_value(json).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn rejects_inconsistent_input() {
        let bad = vec![Measured::new(0.5, 1e-3); 4];
        assert!(MeasurementData::new(2, 1.0, bad.clone(), &[]).is_ok());
        let mut off = bad.clone();
        off[0].value = 0.9;
        assert!(matches!(
            MeasurementData::new(2, 1.0, off, &[]),
            Err(Error::InconsistentData(_))
        ));
        let mut zero_sigma = bad;
        zero_sigma[1].sigma = 0.0;
        assert!(MeasurementData::new(2, 1.0, zero_sigma, &[]).is_err());
    }
}
