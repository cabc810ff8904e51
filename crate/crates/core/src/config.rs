use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_MAX_LATTICE_SIZE: usize = 4096;
pub const DEFAULT_MAX_TRIPLE_CHECKS: u64 = 100_000_000;
/// Above this many elements, start-state verification is sampled.
pub const EXHAUSTIVE_START_CAP: usize = 256;
pub const SAMPLED_STARTS: usize = 64;

/// Caps and run settings shared by the library and the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub max_lattice_size: usize,
    pub max_triple_checks: u64,
    pub rng_seed: u64,
    pub output_path: Option<PathBuf>,
    pub version: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_lattice_size: DEFAULT_MAX_LATTICE_SIZE,
            max_triple_checks: DEFAULT_MAX_TRIPLE_CHECKS,
            rng_seed: 0,
            output_path: None,
            version: FORMAT_VERSION,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config =
            toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_lattice_size == 0 || self.max_triple_checks == 0 {
            return Err(Error::InvalidInput("config: caps must be positive".into()));
        }
        if self.version != FORMAT_VERSION {
            return Err(Error::InvalidInput(format!(
                "config: unsupported version {}",
                self.version
            )));
        }
        Ok(())
    }

    /// Refuse a sweep of `n^power` checks above the cap.
    pub fn check_sweep(&self, n: usize, power: u32) -> Result<()> {
        let requested = (n as u128).pow(power);
        if requested > self.max_triple_checks as u128 {
            return Err(Error::SweepCapExceeded { requested, cap: self.max_triple_checks });
        }
        Ok(())
    }
}
