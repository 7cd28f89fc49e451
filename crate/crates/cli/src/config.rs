//! Run configuration and its lookup order.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use omegaforge::measure::Truncation;

use crate::error::CliError;
use crate::output::parse_json;
use crate::schema::MachineSpec;

pub const CONFIG_ENV: &str = "OMEGA_FORGE_CONFIG";
pub const DEFAULT_CONFIG: &str = "omegaforge.json";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub artifact: Option<PathBuf>,
    #[serde(default)]
    pub trace: Option<PathBuf>,
    #[serde(default)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub machine: Option<MachineSpec>,
    #[serde(default)]
    pub schedule: Vec<Truncation>,
    #[serde(default)]
    pub outputs: Outputs,
    /// Recorded in build logs; reserved for randomized corpora.
    #[serde(default)]
    pub seed: Option<u64>,
}

/// The flag, then the environment variable, then `./omegaforge.json` if it
/// exists.  An explicitly named file must exist.
pub fn locate(flag: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = flag {
        return Some(p.to_path_buf());
    }
    if let Some(p) = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty()) {
        return Some(PathBuf::from(p));
    }
    let default = PathBuf::from(DEFAULT_CONFIG);
    default.is_file().then_some(default)
}

pub fn load(flag: Option<&Path>) -> Result<Option<RunConfig>, CliError> {
    locate(flag).map(|p| parse_json(&p)).transpose()
}

pub fn load_required(flag: Option<&Path>) -> Result<RunConfig, CliError> {
    load(flag)?.ok_or_else(|| {
        CliError::Input(format!(
            "no configuration: pass --config, set {CONFIG_ENV}, or create ./{DEFAULT_CONFIG}"
        ))
    })
}
