//! Run configuration: defaults, then an optional JSON file, then flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub caps: Caps,
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub verbosity: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            caps: Caps::default(),
            workers: None,
            out: None,
            format: Format::Text,
            verbosity: 0,
        }
    }
}

/// Every field optional, for the config file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub caps: Option<Caps>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub verbosity: Option<u8>,
}

/// Flag values; `None` leaves the file or default value in place.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub cap_table: Option<usize>,
    pub cap_dist: Option<usize>,
    pub cap_family: Option<u64>,
    pub cap_weight: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub verbosity: u8,
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed config: {e}")))
}

/// Resolve defaults, the optional file at `path` and the flag overrides.
pub fn load_config(path: Option<&Path>, flags: &Overrides) -> Result<RunConfig> {
    let file = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", p.display())))?;
            parse_config(&text)?
        }
        None => ConfigFile::default(),
    };
    resolve(file, flags)
}

pub fn resolve(file: ConfigFile, flags: &Overrides) -> Result<RunConfig> {
    let d = RunConfig::default();
    let mut caps = file.caps.unwrap_or(d.caps);
    if let Some(v) = flags.cap_table {
        caps.table_vars = v;
    }
    if let Some(v) = flags.cap_dist {
        caps.dist_seed_bits = v;
    }
    if let Some(v) = flags.cap_family {
        caps.family = v;
    }
    if let Some(v) = flags.cap_weight {
        caps.weight_combinations = v;
    }
    caps.validate()?;
    let workers = flags.workers.or(file.workers);
    if workers == Some(0) {
        return Err(Error::invalid("workers must be positive"));
    }
    Ok(RunConfig {
        seed: flags.seed.or(file.seed).unwrap_or(d.seed),
        caps,
        workers,
        out: flags.out.clone().or(file.out),
        format: flags.format.or(file.format).unwrap_or(d.format),
        verbosity: flags.verbosity.max(file.verbosity.unwrap_or(0)),
    })
}
