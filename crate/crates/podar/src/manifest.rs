//! Run manifests: enough to rerun a command and get the same bytes back.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

/// An input file read fully into memory, with its SHA-256.
#[derive(Debug, Clone)]
pub struct Input {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
    pub sha256: String,
}

impl Input {
    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        let sha256 = hex::encode(Sha256::digest(&bytes));
        Ok(Self {
            path: path.to_path_buf(),
            bytes,
            sha256,
        })
    }

    pub fn text(&self) -> Result<&str> {
        std::str::from_utf8(&self.bytes).map_err(|e| CliError::parse(&self.path, e))
    }

    pub fn digest(&self) -> InputDigest {
        InputDigest {
            path: self.path.display().to_string(),
            sha256: self.sha256.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Every setting the command used, defaults included.
    pub config: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub version: String,
    /// Seconds since the Unix epoch. `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(
        command: &str,
        config: &impl Serialize,
        inputs: Vec<InputDigest>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let config = serde_json::to_value(config)
            .map_err(|e| CliError::Usage(format!("config not serializable: {e}")))?;
        Ok(Self {
            command: command.to_string(),
            config,
            inputs,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
        })
    }
}

fn timestamp() -> u64 {
    if let Some(epoch) = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
    {
        return epoch;
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("in-memory JSON serialization");
    out.push(b'\n');
    out
}
