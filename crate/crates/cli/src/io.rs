//! File loading and writing shared by the subcommands.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use bosim::decomposition::{read_layout_csv, InterferometerLayout};
use bosim::{ComplexMatrix, UnitaryMatrix};
use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// Explicit choice, else `.csv` outputs are CSV and everything else JSON.
    pub fn resolve(explicit: Option<Format>, out: &Path) -> Format {
        explicit.unwrap_or_else(|| match out.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        })
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Loads a unitary. With `repair` the matrix is projected onto the nearest
/// unitary, which printed (rounded) matrices need.
pub fn read_unitary(path: &Path, repair: bool) -> Result<UnitaryMatrix> {
    let m: ComplexMatrix = read_json(path)?;
    let u = if repair {
        UnitaryMatrix::repair(&m)
    } else {
        UnitaryMatrix::new(m)
    };
    u.with_context(|| format!("loading unitary from {}", path.display()))
}

/// A parameter table (CSV) or a full layout (JSON, with gauge phases).
pub fn read_layout(path: &Path) -> Result<InterferometerLayout> {
    if Format::resolve(None, path) == Format::Csv {
        let file = fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
        read_layout_csv(file).with_context(|| format!("parsing {}", path.display()))
    } else {
        read_json(path)
    }
}

pub fn json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
