//! Versioned JSON snapshots of a model and its configuration.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use adnf_core::{AdnfConfig, MicroCluster, ModelState};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSnapshot {
    pub version: u64,
    pub config: AdnfConfig,
    pub clusters: Vec<MicroCluster>,
    pub d_max: f64,
    pub p_max: f64,
    pub step: u64,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: u64,
}

impl ModelSnapshot {
    pub fn new(state: &ModelState, config: &AdnfConfig) -> Self {
        Self {
            version: FORMAT_VERSION,
            config: config.clone(),
            clusters: state.clusters.clone(),
            d_max: state.d_max,
            p_max: state.p_max,
            step: state.step,
        }
    }

    pub fn into_parts(self) -> (ModelState, AdnfConfig) {
        let state = ModelState { clusters: self.clusters, d_max: self.d_max, p_max: self.p_max, step: self.step };
        (state, self.config)
    }
}

pub fn save_model(state: &ModelState, config: &AdnfConfig, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, &ModelSnapshot::new(state, config))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<(ModelState, AdnfConfig)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let format_err = |e: serde_json::Error| CliError::Format { path: path.to_path_buf(), message: e.to_string() };
    let probe: VersionProbe = serde_json::from_str(&text).map_err(format_err)?;
    if probe.version != FORMAT_VERSION {
        return Err(CliError::UnsupportedVersion { path: path.to_path_buf(), found: probe.version, expected: FORMAT_VERSION });
    }
    let snapshot: ModelSnapshot = serde_json::from_str(&text).map_err(format_err)?;
    snapshot.config.validate()?;
    Ok(snapshot.into_parts())
}
