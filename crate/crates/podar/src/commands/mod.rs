pub mod calibrate;
pub mod evaluate;
pub mod report;
pub mod synth;

use std::path::Path;

use crate::error::{CliError, Result};
use crate::manifest::{to_json, RunManifest, MANIFEST_FILE};

/// Files a command produces, held in memory until every input has parsed and
/// every computation has succeeded.
#[derive(Debug, Default)]
pub(crate) struct OutputSet {
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn add(&mut self, relative: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((relative.into(), bytes));
    }

    pub fn manifest(&mut self, manifest: &RunManifest) {
        self.add(MANIFEST_FILE, to_json(manifest));
    }

    pub fn write(self, dir: &Path) -> Result<()> {
        for (relative, bytes) in self.files {
            let path = dir.join(relative);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
            }
            std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        }
        Ok(())
    }
}
