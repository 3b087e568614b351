//! Flag and config-file plumbing.  A config file carries the same
//! fields as the flags; explicit flags win, then the file, then the
//! per-command defaults.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl Format {
    fn from_name(name: &str) -> Result<Format> {
        match name {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format {other:?}; expected text, csv, or json"),
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonOpts {
    /// Tolerance of the operation at hand: classifier residual bound,
    /// verification-suite override, Cartan band width
    #[arg(long)]
    pub tol: Option<f64>,

    /// Sample count: classifier triples, suite cases, emitted points
    #[arg(long)]
    pub samples: Option<usize>,

    /// Longest reduced word enumerated when sampling a limit set
    #[arg(long)]
    pub max_word_length: Option<usize>,

    /// Random seed; a fixed seed makes every output byte-identical
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output format (each command defaults to its natural one)
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output path; data goes to stdout when absent
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,

    /// Input path; commands that read data fall back to stdin
    #[arg(long, short = 'i')]
    pub input: Option<PathBuf>,

    /// JSON file holding any of the other flags by name
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    tol: Option<f64>,
    samples: Option<usize>,
    max_word_length: Option<usize>,
    seed: Option<u64>,
    format: Option<String>,
    output: Option<PathBuf>,
    input: Option<PathBuf>,
}

/// Fully merged run configuration.  Fields still optional here get
/// their defaults at the command that uses them, and every resolved
/// value is echoed in that command's JSON output.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub max_word_length: Option<usize>,
    pub seed: u64,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub input: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 2024;

impl CommonOpts {
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str::<FileConfig>(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => FileConfig::default(),
        };
        let format = match (self.format, file.format.as_deref()) {
            (Some(f), _) => Some(f),
            (None, Some(name)) => Some(Format::from_name(name)?),
            (None, None) => None,
        };
        Ok(RunConfig {
            tol: self.tol.or(file.tol),
            samples: self.samples.or(file.samples),
            max_word_length: self.max_word_length.or(file.max_word_length),
            seed: self.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            format,
            output: self.output.clone().or(file.output),
            input: self.input.clone().or(file.input),
        })
    }
}
