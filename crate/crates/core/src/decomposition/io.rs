use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::mesh::{element_count, propagation_order, InterferometerLayout, MeshElement};
use crate::{Error, GaugePhases, Result};

/// Number formatting for parameter tables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TablePrecision {
    /// Shortest representation that parses back to the same `f64`.
    #[default]
    Full,
    /// Two decimals, for side-by-side comparison with printed tables.
    Display,
}

const HEADER: [&str; 4] = ["i", "t", "alpha_rad", "beta_rad"];

/// Writes `i,t,alpha_rad,beta_rad`, one row per element. The external gauge
/// is not part of the table; use the JSON form to keep it.
pub fn write_layout_csv<W: Write>(
    layout: &InterferometerLayout,
    w: W,
    precision: TablePrecision,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(HEADER)?;
    let fmt = |x: f64| match precision {
        TablePrecision::Full => format!("{x}"),
        TablePrecision::Display => format!("{x:.2}"),
    };
    for e in &layout.elements {
        wtr.write_record([e.index.to_string(), fmt(e.t), fmt(e.alpha), fmt(e.beta)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a parameter table. Rows may come in any order; the mode count is
/// inferred from the number of rows and the gauge is trivial.
pub fn read_layout_csv<R: Read>(r: R) -> Result<InterferometerLayout> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(r);
    let mut rows: Vec<(u64, usize, f64, f64, f64)> = Vec::new();
    let mut header_seen = false;
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if !header_seen {
            header_seen = true;
            let got: Vec<&str> = record.iter().collect();
            if got != HEADER {
                return Err(Error::Parse {
                    line,
                    message: format!(
                        "expected header {}, got {}",
                        HEADER.join(","),
                        got.join(",")
                    ),
                });
            }
            continue;
        }
        if record.len() != HEADER.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} columns, got {}", HEADER.len(), record.len()),
            });
        }
        let num = |k: usize| -> Result<f64> {
            record[k].parse::<f64>().map_err(|e| Error::Parse {
                line,
                message: format!("column {}: {:?}: {e}", HEADER[k], &record[k]),
            })
        };
        let index = record[0].parse::<usize>().map_err(|e| Error::Parse {
            line,
            message: format!("column i: {:?}: {e}", &record[0]),
        })?;
        rows.push((line, index, num(1)?, num(2)?, num(3)?));
    }
    if !header_seen {
        return Err(Error::Parse {
            line: 1,
            message: "empty parameter table".into(),
        });
    }
    let n = rows.len();
    let m = (1..=n + 1)
        .find(|&m| element_count(m) == n)
        .filter(|&m| m >= 2)
        .ok_or_else(|| {
            Error::MalformedTopology(format!("{n} elements do not form a triangular mesh"))
        })?;
    rows.sort_by_key(|r| r.1);
    let mut elements = Vec::with_capacity(n);
    for (k, &(line, index, t, alpha, beta)) in rows.iter().enumerate() {
        if index != k + 1 {
            return Err(Error::Parse {
                line,
                message: format!("element labels must be 1..={n} without repeats, found {index}"),
            });
        }
        let e = MeshElement::new(m, index, t, alpha, beta).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        elements.push(e);
    }
    Ok(InterferometerLayout {
        modes: m,
        elements,
        gauge: GaugePhases::trivial(m),
    })
}

#[derive(Serialize, Deserialize)]
struct LayoutFile {
    modes: usize,
    /// Labels in propagation order, informational.
    order: Vec<usize>,
    elements: Vec<ElementRecord>,
    gauge: GaugePhases,
}

#[derive(Serialize, Deserialize)]
struct ElementRecord {
    i: usize,
    /// 1-based `[q, p]`.
    modes: [usize; 2],
    t: f64,
    alpha: f64,
    beta: f64,
}

impl Serialize for InterferometerLayout {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LayoutFile {
            modes: self.modes,
            order: propagation_order(self.modes),
            elements: self
                .elements
                .iter()
                .map(|e| ElementRecord {
                    i: e.index,
                    modes: [e.modes[0] + 1, e.modes[1] + 1],
                    t: e.t,
                    alpha: e.alpha,
                    beta: e.beta,
                })
                .collect(),
            gauge: self.gauge.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InterferometerLayout {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let f = LayoutFile::deserialize(d)?;
        let mut elements = Vec::with_capacity(f.elements.len());
        for r in f.elements {
            if r.modes.contains(&0) {
                return Err(D::Error::custom("mode labels are 1-based"));
            }
            elements.push(MeshElement {
                index: r.i,
                modes: [r.modes[0] - 1, r.modes[1] - 1],
                t: r.t,
                alpha: r.alpha,
                beta: r.beta,
            });
        }
        elements.sort_by_key(|e| e.index);
        let layout = InterferometerLayout {
            modes: f.modes,
            elements,
            gauge: f.gauge,
        };
        layout.validate().map_err(D::Error::custom)?;
        Ok(layout)
    }
}
