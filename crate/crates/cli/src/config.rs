//! JSON run configuration.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use phased_dicke::geometry::{DipoleModel, GeometryConfig};
use phased_dicke::SystemConfig64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Couplings,
    Steady,
    Evolve,
    Spectrum,
    ScanPopulation,
    ScanCoherence,
    ScanCorrelation,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Couplings => "couplings",
            Self::Steady => "steady",
            Self::Evolve => "evolve",
            Self::Spectrum => "spectrum",
            Self::ScanPopulation => "scan-population",
            Self::ScanCoherence => "scan-coherence",
            Self::ScanCorrelation => "scan-correlation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    #[default]
    Isotropic,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    Ground,
    #[default]
    Symmetric,
    Antisymmetric,
    Excited,
    MaximallyMixed,
}

/// Physical parameters; angles are given in units of `pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemSpec {
    pub r12_over_lambda: f64,
    pub zeta_over_pi: f64,
    pub theta_over_pi: f64,
    pub model: Model,
    pub rabi_g: f64,
    pub detuning: f64,
}

impl Default for SystemSpec {
    fn default() -> Self {
        Self {
            r12_over_lambda: 0.125,
            zeta_over_pi: 0.5,
            theta_over_pi: 0.5,
            model: Model::Isotropic,
            rabi_g: 0.1,
            detuning: 0.0,
        }
    }
}

impl SystemSpec {
    pub fn to_system(&self) -> Result<SystemConfig64, CliError> {
        let model = match self.model {
            Model::Isotropic => DipoleModel::IsotropicAverage,
            Model::Fixed => DipoleModel::FixedOrientation,
        };
        let cfg = SystemConfig64 {
            geometry: GeometryConfig {
                r12_over_lambda: self.r12_over_lambda,
                zeta: self.zeta_over_pi * PI,
                theta: self.theta_over_pi * PI,
                model,
            },
            rabi_g: self.rabi_g,
            detuning: self.detuning,
        };
        cfg.validate().map_err(|e| CliError::config("system", e.to_string()))?;
        Ok(cfg)
    }
}

/// Either explicit values or `points` evenly spaced values from `start` to `stop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, points: usize },
}

impl Grid {
    pub fn range(start: f64, stop: f64, points: usize) -> Self {
        Self::Range { start, stop, points }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            Self::Values(ref v) => v.clone(),
            Self::Range { start, stop, points } => match points {
                0 => Vec::new(),
                1 => vec![start],
                n => (0..n)
                    .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }

    fn check(&self, field: &str) -> Result<(), CliError> {
        let v = self.values();
        if v.is_empty() {
            return Err(CliError::config(field, "grid is empty"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::config(field, "grid has non-finite values"));
        }
        if v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::config(field, "grid must be strictly increasing"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi_g: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r12_over_lambda: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_over_pi: Option<Grid>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub system: SystemSpec,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub initial_state: InitialState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Provenance written into sidecars; ignored when reading.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            system: SystemSpec::default(),
            grids: Grids::default(),
            initial_state: InitialState::default(),
            output_path: None,
            format: Format::default(),
            metadata: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config {
            field: None,
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn detunings(&self) -> Grid {
        self.grids.detuning.clone().unwrap_or_else(|| {
            if self.system.rabi_g <= 1.0 {
                Grid::range(-6.0, 6.0, 1201)
            } else {
                Grid::range(-12.0, 12.0, 2401)
            }
        })
    }

    pub fn times(&self) -> Grid {
        self.grids.time.clone().unwrap_or(Grid::range(0.0, 10.0, 1001))
    }

    pub fn rabi_values(&self) -> Grid {
        self.grids.rabi_g.clone().unwrap_or(Grid::range(0.01, 3.0, 300))
    }

    pub fn separations(&self) -> Grid {
        self.grids
            .r12_over_lambda
            .clone()
            .unwrap_or(Grid::range(0.05, 0.5, 226))
    }

    pub fn zetas(&self) -> Grid {
        self.grids
            .zeta_over_pi
            .clone()
            .unwrap_or(Grid::Values(vec![self.system.zeta_over_pi]))
    }

    /// Copy with every grid the experiment reads made explicit.
    pub fn resolved(&self) -> Self {
        let mut out = self.clone();
        let g = &mut out.grids;
        g.zeta_over_pi = Some(self.zetas());
        match self.experiment {
            Experiment::Couplings | Experiment::ScanCorrelation => {
                g.r12_over_lambda = Some(self.separations());
            }
            Experiment::Evolve => g.time = Some(self.times()),
            Experiment::Spectrum => g.detuning = Some(self.detunings()),
            Experiment::ScanPopulation | Experiment::ScanCoherence => {
                g.rabi_g = Some(self.rabi_values());
            }
            Experiment::Steady => {}
        }
        out
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.system.to_system()?;
        let g = &self.grids;
        for (name, grid) in [
            ("grids.detuning", &g.detuning),
            ("grids.time", &g.time),
            ("grids.rabi_g", &g.rabi_g),
            ("grids.r12_over_lambda", &g.r12_over_lambda),
            ("grids.zeta_over_pi", &g.zeta_over_pi),
        ] {
            if let Some(grid) = grid {
                grid.check(name)?;
            }
        }
        if let Some(t) = &g.time {
            if t.values()[0] < 0.0 {
                return Err(CliError::config("grids.time", "times must be non-negative"));
            }
        }
        if let Some(z) = &g.zeta_over_pi {
            let v = z.values();
            if v[0] < 0.0 || v[v.len() - 1] > 1.0 {
                return Err(CliError::config("grids.zeta_over_pi", "angles must lie in [0, 1] (units of pi)"));
            }
        }
        if let Some(r) = &g.rabi_g {
            if r.values()[0] < 0.0 {
                return Err(CliError::config("grids.rabi_g", "Rabi frequencies must be non-negative"));
            }
        }
        if let Some(r) = &g.r12_over_lambda {
            if r.values()[0] <= 0.0 {
                return Err(CliError::config("grids.r12_over_lambda", "separations must be positive"));
            }
        }
        if self.experiment == Experiment::Spectrum && self.system.rabi_g <= 0.0 {
            return Err(CliError::config(
                "system.rabi_g",
                "spectrum normalization needs a positive Rabi frequency",
            ));
        }
        Ok(())
    }
}
