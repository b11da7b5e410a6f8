use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use toeplitz_core::knot::KnotPreset;
use toeplitz_core::{ComplexStructure, QuantizationLevel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Settings shared by every subcommand. All fields are optional in the JSON
/// file; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `[re, im]`, default `[0, 1]`.
    pub tau: Option<[f64; 2]>,
    pub levels: Option<Vec<u32>>,
    pub grid_n: Option<usize>,
    pub seed: Option<u64>,
    pub knot: Option<KnotPreset>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

pub const MIN_GRID: usize = 64;

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// `self` with every field set in `flags` replaced.
    pub fn overridden_by(self, flags: ExperimentConfig) -> Self {
        Self {
            tau: flags.tau.or(self.tau),
            levels: flags.levels.or(self.levels),
            grid_n: flags.grid_n.or(self.grid_n),
            seed: flags.seed.or(self.seed),
            knot: flags.knot.or(self.knot),
            output_path: flags.output_path.or(self.output_path),
            format: flags.format.or(self.format),
        }
    }

    pub fn complex_structure(&self) -> anyhow::Result<ComplexStructure> {
        let [re, im] = self.tau.unwrap_or([0.0, 1.0]);
        Ok(ComplexStructure::new(re, im)?)
    }

    /// Configured levels, or `default` when none are given.
    pub fn levels_or(&self, default: &[u32]) -> anyhow::Result<Vec<QuantizationLevel>> {
        let rs = self.levels.clone().unwrap_or_else(|| default.to_vec());
        if rs.is_empty() {
            bail!("levels must be nonempty");
        }
        if rs.windows(2).any(|w| w[0] >= w[1]) {
            bail!("levels must be strictly increasing, got {rs:?}");
        }
        rs.into_iter().map(|r| Ok(QuantizationLevel::new(r)?)).collect()
    }

    pub fn grid(&self) -> anyhow::Result<Option<usize>> {
        match self.grid_n {
            Some(g) if g < MIN_GRID => bail!("grid_n must be at least {MIN_GRID}, got {g}"),
            g => Ok(g),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn knot_or(&self, default: KnotPreset) -> KnotPreset {
        self.knot.unwrap_or(default)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn output_path(&self, experiment: &str) -> PathBuf {
        self.output_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{experiment}.{}", self.format().extension())))
    }
}

/// `"0.3,1.2"` → `[0.3, 1.2]`.
pub fn parse_pair_f64(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated numbers, got {s:?}"))?;
    let a = a.trim().parse::<f64>().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.trim().parse::<f64>().map_err(|e| format!("{b:?}: {e}"))?;
    Ok([a, b])
}

/// `"1,-2"` → `[1, -2]`.
pub fn parse_pair_i64(s: &str) -> Result<[i64; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated integers, got {s:?}"))?;
    let a = a.trim().parse::<i64>().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.trim().parse::<i64>().map_err(|e| format!("{b:?}: {e}"))?;
    Ok([a, b])
}
