//! Anonymization config: which matrix and mode each column uses.
//!
//! ```toml
//! [[columns]]
//! name = "color"
//! matrix = "color_dp.csv"   # relative to the config file
//! mode = "sample"           # optional
//!
//! [[columns]]
//! name = "age"
//! matrix = "age_secrecy.csv"
//! mode = "linear"
//! ```

use std::path::{Path, PathBuf};

use bistochastic::ColumnMode;
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnConfig {
    pub name: String,
    pub matrix: PathBuf,
    #[serde(default, deserialize_with = "parse_mode")]
    pub mode: Option<ColumnMode>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnonymizeConfig {
    pub columns: Vec<ColumnConfig>,
}

fn parse_mode<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<ColumnMode>, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map(Some).map_err(serde::de::Error::custom)
}

impl AnonymizeConfig {
    /// Parses `text`; relative matrix paths are resolved against `path`'s directory.
    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let mut cfg: AnonymizeConfig = toml::from_str(text).map_err(|source| CliError::Toml {
            path: path.into(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        for c in &mut cfg.columns {
            if c.matrix.is_relative() {
                c.matrix = base.join(&c.matrix);
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(path, &text)
    }

    pub fn column(&self, name: &str) -> Option<&ColumnConfig> {
        self.columns.iter().find(|c| c.name == name)
    }
}
