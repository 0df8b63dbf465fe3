//! Run manifests written next to every output file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(
        command: &str,
        params: &impl Serialize,
        seed: Option<u64>,
        inputs: &[&Path],
    ) -> Result<Self> {
        let inputs = inputs
            .iter()
            .map(|p| {
                let bytes = fs::read(p).with_context(|| format!("reading {}", p.display()))?;
                Ok(InputDigest {
                    path: p.to_path_buf(),
                    sha256: hex::encode(Sha256::digest(&bytes)),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            command: command.to_owned(),
            params: serde_json::to_value(params)?,
            seed,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            inputs,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        })
    }

    /// `<out>.manifest.json`
    pub fn path_for(out: &Path) -> PathBuf {
        let mut name = out.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        out.with_file_name(name)
    }

    pub fn write_for(&self, out: &Path) -> Result<()> {
        let path = Self::path_for(out);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_sits_next_to_the_output() {
        assert_eq!(
            RunManifest::path_for(Path::new("runs/u.json")),
            PathBuf::from("runs/u.json.manifest.json")
        );
    }

    #[test]
    fn digests_inputs() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x");
        fs::write(&p, "abc").unwrap();
        let m = RunManifest::new("t", &serde_json::json!({}), None, &[&p]).unwrap();
        assert_eq!(
            m.inputs[0].sha256,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
