use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::apply_gauge;
use crate::{ComplexMatrix, Error, GaugePhases, Result, UnitaryMatrix};

/// Slack allowed on the `[0, π]` phase range and the `[0, 1]` transmissivity
/// range when validating parsed or user-built layouts.
const RANGE_SLACK: f64 = 1e-9;

/// One beam splitter with its two input phase shifters.
///
/// `modes = [q, p]` with `q < p` (0-based). On those two modes, ordered
/// `(p, q)`, the element acts as
///
/// ```text
/// [ t  r ] [ e^{iα}    0    ]
/// [-r  t ] [   0    e^{iβ}  ]      r = √(1 − t²)
/// ```
///
/// so `α` sits on the input arm of mode `p` and `β` on that of mode `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshElement {
    /// 1-based label, numbered along the diagonals of the triangle.
    pub index: usize,
    pub modes: [usize; 2],
    /// Amplitude transmissivity; `t²` is the probability of staying in the
    /// same mode.
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl MeshElement {
    /// Element `index` of an `m`-mode mesh.
    pub fn new(m: usize, index: usize, t: f64, alpha: f64, beta: f64) -> Result<Self> {
        let modes = element_modes(m, index)?;
        let e = Self {
            index,
            modes,
            t,
            alpha,
            beta,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        let i = self.index;
        if !(self.t.is_finite() && (-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&self.t)) {
            return Err(Error::OutOfRange(format!(
                "element {i}: transmissivity {} outside [0, 1]",
                self.t
            )));
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v.is_finite() && (-RANGE_SLACK..=PI + RANGE_SLACK).contains(&v)) {
                return Err(Error::OutOfRange(format!(
                    "element {i}: {name} = {v} outside [0, π]"
                )));
            }
        }
        Ok(())
    }

    /// The 2×2 block in `(p, q)` order.
    pub fn block(&self) -> [[Complex64; 2]; 2] {
        element_block(self.t, self.alpha, self.beta)
    }
}

pub(crate) fn element_block(t: f64, alpha: f64, beta: f64) -> [[Complex64; 2]; 2] {
    let t = t.clamp(0.0, 1.0);
    let r = (1.0 - t * t).sqrt();
    let ea = Complex64::from_polar(1.0, alpha);
    let eb = Complex64::from_polar(1.0, beta);
    [[ea * t, eb * r], [-ea * r, eb * t]]
}

/// `m × m` unitary of a single element: identity outside its two modes.
pub fn element_unitary(e: &MeshElement, m: usize) -> Result<UnitaryMatrix> {
    let [q, p] = e.modes;
    if q >= p || p >= m {
        return Err(Error::MalformedTopology(format!(
            "element {} acts on modes {:?} of a {m}-mode mesh",
            e.index, e.modes
        )));
    }
    let b = e.block();
    let mut u = ComplexMatrix::identity(m);
    u[(p, p)] = b[0][0];
    u[(p, q)] = b[0][1];
    u[(q, p)] = b[1][0];
    u[(q, q)] = b[1][1];
    Ok(UnitaryMatrix::from_unchecked(u))
}

pub fn element_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Modes `[q, p]` of element `index` (1-based). Labels run along the
/// diagonals `p − q = 1, 2, …`, each diagonal from the highest mode down.
pub fn element_modes(m: usize, index: usize) -> Result<[usize; 2]> {
    if index == 0 || index > element_count(m) {
        return Err(Error::MalformedTopology(format!(
            "element index {index} outside 1..={} for {m} modes",
            element_count(m)
        )));
    }
    let mut rest = index - 1;
    let mut d = 1;
    while rest >= m - d {
        rest -= m - d;
        d += 1;
    }
    let p = m - 1 - rest;
    Ok([p - d, p])
}

/// 1-based label of the element on modes `q < p`.
pub fn element_index(m: usize, q: usize, p: usize) -> Result<usize> {
    if q >= p || p >= m {
        return Err(Error::MalformedTopology(format!(
            "no element on modes ({q}, {p}) for {m} modes"
        )));
    }
    let d = p - q;
    let before: usize = (1..d).map(|k| m - k).sum();
    Ok(before + (m - 1 - p) + 1)
}

/// Element labels in the order light meets them: the first entry is nearest
/// the inputs. This is also the order in which nulling extracts them.
pub fn propagation_order(m: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(element_count(m));
    for p in (1..m).rev() {
        for q in (0..p).rev() {
            order.push(element_index(m, q, p).expect("valid pair"));
        }
    }
    order
}

/// A full triangular mesh plus the external phases on its ports.
///
/// `elements` are kept sorted by label.
#[derive(Clone, Debug, PartialEq)]
pub struct InterferometerLayout {
    pub modes: usize,
    pub elements: Vec<MeshElement>,
    pub gauge: GaugePhases,
}

impl InterferometerLayout {
    /// Mesh with every element fully transmissive and no phases.
    pub fn identity(m: usize) -> Self {
        let elements = (1..=element_count(m))
            .map(|i| MeshElement::new(m, i, 1.0, 0.0, 0.0).expect("valid element"))
            .collect();
        Self {
            modes: m,
            elements,
            gauge: GaugePhases::trivial(m),
        }
    }

    /// Builds a layout from `(t, α, β)` triples in label order.
    pub fn from_parameters(
        m: usize,
        params: &[(f64, f64, f64)],
        gauge: GaugePhases,
    ) -> Result<Self> {
        if params.len() != element_count(m) {
            return Err(Error::MalformedTopology(format!(
                "{m} modes need {} elements, got {}",
                element_count(m),
                params.len()
            )));
        }
        let elements = params
            .iter()
            .enumerate()
            .map(|(k, &(t, a, b))| MeshElement::new(m, k + 1, t, a, b))
            .collect::<Result<Vec<_>>>()?;
        let layout = Self {
            modes: m,
            elements,
            gauge,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn element(&self, index: usize) -> Option<&MeshElement> {
        self.elements
            .get(index.wrapping_sub(1))
            .filter(|e| e.index == index)
    }

    /// Checks the element count, labels, mode pairs, parameter ranges and
    /// gauge size.
    pub fn validate(&self) -> Result<()> {
        let m = self.modes;
        if m == 0 {
            return Err(Error::InvalidDimension(
                "a mesh needs at least one mode".into(),
            ));
        }
        if self.elements.len() != element_count(m) {
            return Err(Error::MalformedTopology(format!(
                "{m} modes need {} elements, got {}",
                element_count(m),
                self.elements.len()
            )));
        }
        for (k, e) in self.elements.iter().enumerate() {
            if e.index != k + 1 {
                return Err(Error::MalformedTopology(format!(
                    "element at position {} is labelled {}",
                    k + 1,
                    e.index
                )));
            }
            let expected = element_modes(m, e.index)?;
            if e.modes != expected {
                return Err(Error::MalformedTopology(format!(
                    "element {} acts on modes {:?}, expected {:?}",
                    e.index, e.modes, expected
                )));
            }
            e.validate()?;
        }
        if self.gauge.modes() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: self.gauge.modes(),
            });
        }
        Ok(())
    }

    /// Number of element phases that are not zero.
    pub fn nonzero_phase_count(&self) -> usize {
        self.elements
            .iter()
            .map(|e| (e.alpha != 0.0) as usize + (e.beta != 0.0) as usize)
            .sum()
    }
}

/// Product of all element unitaries in propagation order, with the external
/// gauge applied on both sides.
pub fn compose(layout: &InterferometerLayout) -> Result<UnitaryMatrix> {
    layout.validate()?;
    let m = layout.modes;
    let blocks: Vec<_> = layout
        .elements
        .iter()
        .map(|e| (e.modes, e.block()))
        .collect();
    let mesh = compose_blocks(m, propagation_order(m).into_iter().map(|i| blocks[i - 1]));
    apply_gauge(&UnitaryMatrix::from_unchecked(mesh), &layout.gauge)
}

/// Left-multiplies successive two-mode blocks onto the identity.
pub(crate) fn compose_blocks(
    m: usize,
    blocks: impl IntoIterator<Item = ([usize; 2], [[Complex64; 2]; 2])>,
) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(m);
    for ([q, p], b) in blocks {
        for c in 0..m {
            let up = u[(p, c)];
            let uq = u[(q, c)];
            u[(p, c)] = b[0][0] * up + b[0][1] * uq;
            u[(q, c)] = b[1][0] * up + b[1][1] * uq;
        }
    }
    u
}
