use std::path::PathBuf;

use serde::Deserialize;

use crate::error::{GhdError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    Sampling,
    Sketch,
    #[serde(alias = "det")]
    Deterministic,
    #[serde(alias = "stream")]
    Streaming,
}

impl ProtocolKind {
    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Sampling => "sampling",
            ProtocolKind::Sketch => "sketch",
            ProtocolKind::Deterministic => "deterministic",
            ProtocolKind::Streaming => "streaming",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingRateKind {
    #[default]
    Provable,
    Multiplicative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    #[default]
    Exact,
    Truncated,
}

/// Experiment description, read from TOML. Grid keys take arrays and the
/// grid is their Cartesian product:
///
/// | protocol        | grid keys          |
/// |-----------------|--------------------|
/// | `sampling`      | `n`, `L`, `U`, `s` |
/// | `sketch`        | `n`, `L`, `U`, `s` |
/// | `deterministic` | `n`, `t` (empty `t` means every `1..=n`) |
/// | `streaming`     | `n`, `c`, `p`      |
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: ProtocolKind,
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default, rename = "L")]
    pub lower: Vec<usize>,
    #[serde(default, rename = "U")]
    pub upper: Vec<usize>,
    #[serde(default)]
    pub t: Vec<usize>,
    #[serde(default)]
    pub s: Vec<f64>,
    #[serde(default)]
    pub c: Vec<f64>,
    #[serde(default)]
    pub p: Vec<usize>,
    /// Monte Carlo runs per class (close and far) per grid point.
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: OutputFormat,
    /// Sketch only: run even when `s < (L + 10/n)^3 / U^2`.
    #[serde(default)]
    pub allow_hypothesis_violation: bool,
    #[serde(default)]
    pub sampling_rate: SamplingRateKind,
    #[serde(default = "default_rate_constant")]
    pub rate_constant: f64,
    /// Deterministic only: covering code file used for grid points whose
    /// `(n, floor((t-1)/2))` match its header.
    #[serde(default)]
    pub code_file: Option<PathBuf>,
    #[serde(default)]
    pub algorithm: AlgorithmKind,
    /// Truncated algorithm state width in bits.
    #[serde(default = "default_truncated_width")]
    pub truncated_width: usize,
}

fn default_trials() -> u64 {
    1000
}

fn default_rate_constant() -> f64 {
    8.0
}

fn default_truncated_width() -> usize {
    8
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| GhdError::Parse(e.to_string()))?;
        if config.trials == 0 {
            return Err(GhdError::Parse("trials must be at least 1".into()));
        }
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GhdError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn new(protocol: ProtocolKind) -> Self {
        Self {
            protocol,
            n: vec![],
            lower: vec![],
            upper: vec![],
            t: vec![],
            s: vec![],
            c: vec![],
            p: vec![],
            trials: default_trials(),
            seed: 0,
            format: OutputFormat::Csv,
            allow_hypothesis_violation: false,
            sampling_rate: SamplingRateKind::Provable,
            rate_constant: default_rate_constant(),
            code_file: None,
            algorithm: AlgorithmKind::Exact,
            truncated_width: default_truncated_width(),
        }
    }
}
