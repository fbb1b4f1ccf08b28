use std::path::Path;

use anyhow::{Context, Result};
use regmap::{parse_ops, Limits, Operation, DEFAULT_OPS};
use serde::Deserialize;

/// Optional TOML settings; command-line flags win over everything here.
///
/// ```toml
/// jobs = 4
/// default_ops = "D,H2"
///
/// [limits]
/// group_order = 20000
/// generic_aut_order = 1200
/// lattice_order = 1200
/// ```
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub jobs: Option<usize>,
    pub default_ops: Option<String>,
    #[serde(default)]
    pub limits: Limits,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: Config = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.ops()?;
        Ok(cfg)
    }

    pub fn ops(&self) -> Result<Vec<Operation>> {
        match &self.default_ops {
            Some(s) => Ok(parse_ops(s)?),
            None => Ok(DEFAULT_OPS.to_vec()),
        }
    }
}
