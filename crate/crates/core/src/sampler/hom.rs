use serde::{Deserialize, Serialize};

use crate::{Error, Result, UnitaryMatrix};

/// Classical coincidence probabilities below this are treated as "no
/// coincidences" and the visibility is left undefined.
pub const MIN_CLASSICAL_COINCIDENCE: f64 = 1e-12;

/// Two-photon coincidence probabilities for inputs `i, j` and outputs `k, l`
/// (`k ≠ l`): `(P_cl, P_q)` for distinguishable and indistinguishable photons.
pub fn coincidence_probabilities(
    u: &UnitaryMatrix,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Result<(f64, f64)> {
    let m = u.dim();
    if [i, j, k, l].iter().any(|&x| x >= m) {
        return Err(Error::OutOfRange(format!("mode index outside 0..{m}")));
    }
    if i == j || k == l {
        return Err(Error::InvalidDimension(
            "visibilities need two distinct input and two distinct output modes".into(),
        ));
    }
    let direct = u[(k, i)] * u[(l, j)];
    let crossed = u[(k, j)] * u[(l, i)];
    Ok((
        direct.norm_sqr() + crossed.norm_sqr(),
        (direct + crossed).norm_sqr(),
    ))
}

/// `V = (P_cl − P_q) / P_cl` for one input pair and one output pair.
pub fn hom_visibility(u: &UnitaryMatrix, i: usize, j: usize, k: usize, l: usize) -> Result<f64> {
    let (p_cl, p_q) = coincidence_probabilities(u, i, j, k, l)?;
    if p_cl < MIN_CLASSICAL_COINCIDENCE {
        return Err(Error::UndefinedVisibility { p_classical: p_cl });
    }
    Ok((p_cl - p_q) / p_cl)
}

/// Visibility expected when only a fraction `q` of the two-photon state
/// interferes.
pub fn degrade_visibility(v: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::OutOfRange(format!(
            "indistinguishability {q} outside [0, 1]"
        )));
    }
    Ok(q * v)
}

/// Unordered mode pairs `(a, b)` with `a < b`, in lexicographic order.
pub fn mode_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .collect()
}

pub(crate) fn pair_index(m: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    a * (2 * m - a - 1) / 2 + (b - a - 1)
}

/// `V(i,j; K,L)` for every unordered input pair and output pair. Entries with
/// no classical coincidences are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct VisibilityTensor {
    m: usize,
    values: Vec<Option<f64>>,
}

impl VisibilityTensor {
    /// A tensor with every entry missing.
    pub fn empty(m: usize) -> Self {
        let n = m * m.saturating_sub(1) / 2;
        Self {
            m,
            values: vec![None; n * n],
        }
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn pair_count(&self) -> usize {
        self.m * self.m.saturating_sub(1) / 2
    }

    fn slot(&self, i: usize, j: usize, k: usize, l: usize) -> Option<usize> {
        let m = self.m;
        if i == j || k == l || [i, j, k, l].iter().any(|&x| x >= m) {
            return None;
        }
        Some(pair_index(m, i, j) * self.pair_count() + pair_index(m, k, l))
    }

    /// Symmetric in `i ↔ j` and `k ↔ l`.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Option<f64> {
        self.slot(i, j, k, l).and_then(|s| self.values[s])
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: Option<f64>) -> Result<()> {
        let s = self.slot(i, j, k, l).ok_or_else(|| {
            Error::OutOfRange(format!(
                "visibility index ({i},{j};{k},{l}) for m = {}",
                self.m
            ))
        })?;
        self.values[s] = v;
        Ok(())
    }

    /// All entries as `(i, j, k, l, value)` with `i < j`, `k < l`.
    pub fn entries(&self) -> Vec<(usize, usize, usize, usize, Option<f64>)> {
        let pairs = mode_pairs(self.m);
        let mut out = Vec::with_capacity(self.values.len());
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                out.push((i, j, k, l, self.values[a * pairs.len() + b]));
            }
        }
        out
    }

    pub fn defined_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    /// Every defined entry multiplied by `q`.
    pub fn degraded(&self, q: f64) -> Result<Self> {
        degrade_visibility(0.0, q)?;
        Ok(Self {
            m: self.m,
            values: self.values.iter().map(|v| v.map(|v| q * v)).collect(),
        })
    }
}

/// Full visibility tensor of `u`, scaled by the indistinguishability `q`.
pub fn visibility_tensor(u: &UnitaryMatrix, q: f64) -> Result<VisibilityTensor> {
    degrade_visibility(0.0, q)?;
    let m = u.dim();
    let mut t = VisibilityTensor::empty(m);
    for (i, j, k, l, _) in t.entries() {
        let v = match hom_visibility(u, i, j, k, l) {
            Ok(v) => Some(q * v),
            Err(Error::UndefinedVisibility { .. }) => None,
            Err(e) => return Err(e),
        };
        t.set(i, j, k, l, v)?;
    }
    Ok(t)
}

#[derive(Serialize, Deserialize)]
struct TensorFile {
    m: usize,
    entries: Vec<TensorEntry>,
}

#[derive(Serialize, Deserialize)]
struct TensorEntry {
    i: usize,
    j: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "L")]
    l: usize,
    v: Option<f64>,
}

/// JSON uses 1-based mode labels; missing entries are `null`.
impl Serialize for VisibilityTensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorFile {
            m: self.m,
            entries: self
                .entries()
                .into_iter()
                .map(|(i, j, k, l, v)| TensorEntry {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    l: l + 1,
                    v,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VisibilityTensor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let f = TensorFile::deserialize(d)?;
        let mut t = VisibilityTensor::empty(f.m);
        for e in f.entries {
            if [e.i, e.j, e.k, e.l].contains(&0) {
                return Err(D::Error::custom("mode labels are 1-based"));
            }
            t.set(e.i - 1, e.j - 1, e.k - 1, e.l - 1, e.v)
                .map_err(D::Error::custom)?;
        }
        Ok(t)
    }
}
