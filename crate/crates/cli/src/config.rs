//! Run configuration: the backend plus output and seeding choices, loaded
//! from TOML or JSON and overridden by command-line flags.

use std::path::{Path, PathBuf};

use bruhat_tits::backend::{Backend, BackendConfig};
use bruhat_tits::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Dot,
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Dot => "dot",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub backend: BackendConfig,
    /// `None` selects `2g + 6`.
    #[serde(default)]
    pub radius: Option<usize>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    #[serde(default)]
    pub seed: u64,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("btq-out")
}

fn default_formats() -> Vec<Format> {
    vec![Format::Dot, Format::Json, Format::Csv]
}

impl RunConfig {
    pub fn new(backend: BackendConfig) -> Self {
        RunConfig { backend, radius: None, output_dir: default_output_dir(), formats: default_formats(), seed: 0 }
    }

    /// A file holding either a full run configuration or a bare backend.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let toml = path.extension().is_some_and(|e| e == "toml");
        let value: serde_json::Value = if toml {
            let t: toml::Value = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            serde_json::to_value(t)?
        } else {
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        };
        let parsed = if value.get("backend").is_some() {
            serde_json::from_value(value)
        } else {
            serde_json::from_value(value).map(RunConfig::new)
        };
        parsed.map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Builds the backend; invalid curves or quadratics are rejected here.
    pub fn build(&self) -> Result<Backend> {
        Backend::new(self.backend.clone())
    }
}
