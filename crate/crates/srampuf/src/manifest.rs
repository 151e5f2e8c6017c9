//! Run manifests: every artifact-producing command records what it ran
//! with, so the run reproduces exactly from the manifest alone.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "run_manifest.json";

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    /// Resolved parameters, including any randomness drawn at startup.
    pub parameters: serde_json::Value,
    pub rng_seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_ms: u128,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value, rng_seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            parameters,
            rng_seed,
            outputs: Vec::new(),
            wall_clock_ms: 0,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Data(format!("manifest serialization: {e}")))?;
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<RunManifest> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Data(format!("manifest parse: {e}")))
    }
}
