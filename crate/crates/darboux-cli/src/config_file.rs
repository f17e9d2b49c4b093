//! On-disk run-configuration schema and its conversion into library types.
//!
//! A run configuration is a single JSON document. Complex numbers are
//! two-element arrays `[re, im]`; the coupling matrix is a row-major array
//! of rows of such pairs. The `grid`, `k_samples`, and `output` sections are
//! optional: each verb checks for the sections it actually needs.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use darboux::linalg::CMatrix;
use darboux::{
    config, BackgroundModel, CouplingMatrix, Cx, DressingConfig, Error, Result,
    SpectralParameters,
};

/// A complex number on disk: `[re, im]`.
pub type ComplexPair = [f64; 2];

/// Convert an on-disk pair into a complex value.
pub fn complex(pair: ComplexPair) -> Cx {
    Cx::new(pair[0], pair[1])
}

/// Top-level run configuration document.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Dressing data: spectral parameters, coupling matrix, background.
    pub dressing: DressingSection,
    /// Evaluation grid, required by the grid verbs (`potential`, `jost`).
    #[serde(default)]
    pub grid: Option<GridSection>,
    /// Spectral samples for `jost` and `spectral`.
    #[serde(default)]
    pub k_samples: Vec<ComplexPair>,
    /// Output destination defaults; command-line flags take precedence.
    #[serde(default)]
    pub output: OutputSection,
}

impl RunConfig {
    /// Parse a run configuration from a JSON file.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidConfig(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("config parse error: {e}")))
    }

    /// Spectral samples as complex values.
    pub fn k_samples(&self) -> Vec<Cx> {
        self.k_samples.iter().copied().map(complex).collect()
    }

    /// The grid section, or an invalid-config error naming the verb that
    /// needed it.
    pub fn require_grid(&self, verb: &str) -> Result<GridSection> {
        self.grid.ok_or_else(|| {
            Error::InvalidConfig(format!("the {verb} verb requires a grid section in the config"))
        })
    }
}

/// Declarative form of the dressing data.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DressingSection {
    /// Spectral parameters λ₁..λ_N as `[re, im]` pairs.
    pub lambdas: Vec<ComplexPair>,
    /// Hermitian N×N coupling matrix, row-major, entries `[re, im]`.
    pub coupling: Vec<Vec<ComplexPair>>,
    /// Background model; defaults to the exact zero background.
    #[serde(default = "BackgroundModel::zero")]
    pub background: BackgroundModel,
}

impl DressingSection {
    /// Spectral parameters as library values.
    pub fn spectral_parameters(&self) -> SpectralParameters {
        SpectralParameters::new(self.lambdas.iter().copied().map(complex).collect())
    }

    /// Coupling matrix as a library value; rejects ragged rows.
    pub fn coupling_matrix(&self) -> Result<CouplingMatrix> {
        let n = self.coupling.len();
        for (l, row) in self.coupling.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidConfig(format!(
                    "coupling matrix is not square: row {l} has {} entries for {n} rows",
                    row.len()
                )));
            }
        }
        let m = CMatrix::from_fn(n, n, |l, mi| complex(self.coupling[l][mi]));
        Ok(CouplingMatrix::new(m))
    }

    /// Full validated dressing configuration.
    pub fn dressing_config(&self) -> Result<DressingConfig> {
        DressingConfig::new(self.spectral_parameters(), self.coupling_matrix()?, self.background.clone())
    }

    /// Validation findings without constructing the configuration.
    pub fn validation_report(&self) -> Result<config::ValidationReport> {
        config::validate_config(&self.spectral_parameters(), &self.coupling_matrix()?)
    }
}

/// Rectangular evaluation grid: inclusive bounds and point counts per axis.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub x1_min: f64,
    pub x1_max: f64,
    pub x1_steps: usize,
    pub x2_min: f64,
    pub x2_max: f64,
    pub x2_steps: usize,
}

impl GridSection {
    /// Check bounds ordering and step counts.
    pub fn validate(&self) -> Result<()> {
        for (name, min, max, steps) in [
            ("x1", self.x1_min, self.x1_max, self.x1_steps),
            ("x2", self.x2_min, self.x2_max, self.x2_steps),
        ] {
            if !min.is_finite() || !max.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} grid bounds must be finite")));
            }
            if steps < 1 {
                return Err(Error::InvalidConfig(format!(
                    "{name}_steps must be at least 1, got {steps}"
                )));
            }
            if steps == 1 {
                if min > max {
                    return Err(Error::InvalidConfig(format!(
                        "{name} grid bounds out of order: {min} > {max}"
                    )));
                }
            } else if !(min < max) {
                return Err(Error::InvalidConfig(format!(
                    "{name} grid bounds must be strictly increasing for {steps} points: \
                     got [{min}, {max}]"
                )));
            }
        }
        Ok(())
    }

    /// Sample coordinates along the first axis (inclusive endpoints).
    pub fn x1_values(&self) -> Vec<f64> {
        axis_values(self.x1_min, self.x1_max, self.x1_steps)
    }

    /// Sample coordinates along the second axis (inclusive endpoints).
    pub fn x2_values(&self) -> Vec<f64> {
        axis_values(self.x2_min, self.x2_max, self.x2_steps)
    }

    /// Total number of grid cells.
    pub fn cells(&self) -> usize {
        self.x1_steps * self.x2_steps
    }
}

fn axis_values(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let span = max - min;
    let denom = (steps - 1) as f64;
    (0..steps).map(|i| min + span * (i as f64 / denom)).collect()
}

/// Output defaults from the config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Preferred format for grid outputs.
    #[serde(default)]
    pub format: Option<OutputFormat>,
    /// Destination path; stdout when absent.
    #[serde(default)]
    pub path: Option<PathBuf>,
}

/// Grid output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}
