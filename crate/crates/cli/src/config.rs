use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wqed::observables::{AlphaSpec, MapOptions, T2Options};
use wqed::quadrature::QuadSettings;
use wqed::scattering::{ProbabilityOptions, PulseShape};
use wqed::LatticeParams;

use crate::CliError;

/// Inclusive linspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range(Range),
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::List(v) => v.clone(),
            GridSpec::Range(r) if r.count == 1 => vec![r.start],
            GridSpec::Range(r) => {
                let step = (r.stop - r.start) / (r.count - 1) as f64;
                (0..r.count).map(|k| if k + 1 == r.count { r.stop } else { r.start + step * k as f64 }).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grids {
    pub h_over_j: GridSpec,
    pub alpha: AlphaSpec,
    pub gamma_over_j: Vec<f64>,
    /// Chain lengths for scaling runs; empty means `params.n` alone.
    pub n: Vec<usize>,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            h_over_j: GridSpec::Range(Range { start: 0.0, stop: 4.0, count: 41 }),
            alpha: AlphaSpec::All,
            gamma_over_j: vec![0.0, 1e-4, 0.1],
            n: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Mode {
    pub pulse: PulseShape,
}

impl Default for Mode {
    fn default() -> Self {
        Self { pulse: PulseShape::Lorentzian }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Integration {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Integration {
    fn default() -> Self {
        let q = QuadSettings::default();
        Self { rel_tol: q.rel_tol, max_subdivisions: q.max_subdivisions }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// A complete run description. Parameters are in units of the hopping J.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub params: LatticeParams,
    pub grids: Grids,
    pub mode: Mode,
    pub integration: Integration,
    pub workers: Option<usize>,
    pub output: OutputSpec,
}

fn config_error(reason: impl Into<String>) -> CliError {
    CliError::Config(reason.into())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| config_error(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params.validate().map_err(|e| config_error(e.to_string()))?;
        if let GridSpec::Range(r) = &self.grids.h_over_j {
            if r.count == 0 {
                return Err(config_error("grids.h_over_j: count must be at least 1"));
            }
        }
        if self.grids.h_over_j.values().iter().any(|h| !h.is_finite()) {
            return Err(config_error("grids.h_over_j: values must be finite"));
        }
        if self.grids.gamma_over_j.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(config_error("grids.gamma_over_j: values must be finite and non-negative"));
        }
        if self.grids.n.iter().any(|&n| n == 0) {
            return Err(config_error("grids.n: chain lengths must be positive"));
        }
        if !(self.integration.rel_tol > 0.0 && self.integration.rel_tol < 1.0) {
            return Err(config_error("integration.rel_tol must lie in (0, 1)"));
        }
        if self.integration.max_subdivisions == 0 {
            return Err(config_error("integration.max_subdivisions must be positive"));
        }
        if self.workers == Some(0) {
            return Err(config_error("workers must be positive"));
        }
        Ok(())
    }

    /// h values of the grid in absolute units.
    pub fn h_values(&self) -> Vec<f64> {
        self.grids.h_over_j.values().iter().map(|h| h * self.params.j).collect()
    }

    pub fn gamma_values(&self) -> Vec<f64> {
        self.grids.gamma_over_j.iter().map(|g| g * self.params.j).collect()
    }

    pub fn n_values(&self) -> Vec<usize> {
        if self.grids.n.is_empty() {
            vec![self.params.n]
        } else {
            self.grids.n.clone()
        }
    }

    pub fn map_options(&self) -> MapOptions {
        let quad = QuadSettings {
            rel_tol: self.integration.rel_tol,
            max_subdivisions: self.integration.max_subdivisions,
            ..QuadSettings::default()
        };
        MapOptions {
            t2: T2Options { pulse: self.mode.pulse, probability: ProbabilityOptions { quad, ..Default::default() } },
            workers: self.workers,
        }
    }

    /// The config as embedded in output files: everything that affects the
    /// numbers, nothing about where or how fast they were produced.
    pub fn replay_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = v.as_object_mut() {
            map.remove("workers");
            map.remove("output");
        }
        v
    }
}
