//! Experiment configuration documents (JSON).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::SUCCESS_THRESHOLD_DB;
use crate::models::AntennaScenarioConfig;
use crate::solvers::NonconvexSettings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    GaussSweep,
    Antenna,
    Solve,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::GaussSweep => "gauss-sweep",
            ExperimentKind::Antenna => "antenna",
            ExperimentKind::Solve => "solve",
        })
    }
}

/// Retrieval method run on a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Linear solve over coefficients and group phases.
    LinearPc,
    /// `LinearPc` followed by a coherent re-solve with unit-modulus phases.
    LinearPcRefined,
    /// Nonconvex intensity fit on the system augmented by pair combinations.
    NonconvexAugmented,
    /// Nonconvex intensity fit on the plain magnitudes.
    NonconvexIncoherent,
    /// Least squares on the complex field (reference; needs full phase).
    Coherent,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::LinearPc,
        Method::LinearPcRefined,
        Method::NonconvexAugmented,
        Method::NonconvexIncoherent,
        Method::Coherent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::LinearPc => "linear-pc",
            Method::LinearPcRefined => "linear-pc-refined",
            Method::NonconvexAugmented => "nonconvex-augmented",
            Method::NonconvexIncoherent => "nonconvex-incoherent",
            Method::Coherent => "coherent",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub spectral_iterations: usize,
    pub nonconvex: NonconvexSettings,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            spectral_iterations: 40,
            nonconvex: NonconvexSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaussConfig {
    pub n: usize,
    pub m1: usize,
    pub m2: Vec<usize>,
}

impl Default for GaussConfig {
    fn default() -> Self {
        Self {
            n: 20,
            m1: 20,
            m2: (1..=30).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AntennaConfig {
    pub scenario: AntennaScenarioConfig,
    /// Noise level relative to the peak magnitude; `null` means noiseless.
    pub snr_db: Option<f64>,
}

impl Default for AntennaConfig {
    fn default() -> Self {
        Self {
            scenario: AntennaScenarioConfig::default(),
            snr_db: Some(60.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Checked against the subcommand when present.
    pub kind: Option<ExperimentKind>,
    pub master_seed: u64,
    /// Trials per sweep point (gauss) or scenario realizations (antenna).
    /// Defaults to 500 and 10.
    pub trials: Option<usize>,
    /// Defaults depend on the experiment kind.
    pub methods: Option<Vec<Method>>,
    pub success_threshold_db: f64,
    pub solver: SolverConfig,
    pub gauss: GaussConfig,
    pub antenna: AntennaConfig,
    /// Used when no output directory is given on the command line.
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: None,
            master_seed: 1,
            trials: None,
            methods: None,
            success_threshold_db: SUCCESS_THRESHOLD_DB,
            solver: SolverConfig::default(),
            gauss: GaussConfig::default(),
            antenna: AntennaConfig::default(),
            output_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn trials_for(&self, kind: ExperimentKind) -> usize {
        self.trials.unwrap_or(match kind {
            ExperimentKind::Antenna => 10,
            _ => 500,
        })
    }

    pub fn methods_for(&self, kind: ExperimentKind) -> Vec<Method> {
        match &self.methods {
            Some(m) => m.clone(),
            None => match kind {
                ExperimentKind::Antenna => vec![
                    Method::Coherent,
                    Method::LinearPc,
                    Method::LinearPcRefined,
                    Method::NonconvexAugmented,
                    Method::NonconvexIncoherent,
                ],
                _ => vec![Method::LinearPc, Method::NonconvexAugmented, Method::NonconvexIncoherent],
            },
        }
    }

    /// Checks the fields used by `kind`.
    pub fn validate(&self, kind: ExperimentKind) -> Result<()> {
        if let Some(k) = self.kind {
            if k != kind {
                return Err(Error::Config(format!("config is for '{k}', not '{kind}'")));
            }
        }
        if self.trials_for(kind) == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let methods = self.methods_for(kind);
        if methods.is_empty() {
            return Err(Error::Config("methods must not be empty".into()));
        }
        let mut seen = methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != methods.len() {
            return Err(Error::Config("methods must not repeat".into()));
        }
        if !self.success_threshold_db.is_finite() {
            return Err(Error::Config("success_threshold_db must be finite".into()));
        }
        if self.solver.spectral_iterations == 0 {
            return Err(Error::Config("spectral_iterations must be at least 1".into()));
        }
        self.solver.nonconvex.validate()?;
        match kind {
            ExperimentKind::GaussSweep => {
                let g = &self.gauss;
                if g.n == 0 {
                    return Err(Error::Config("gauss.n must be positive".into()));
                }
                if g.m2.is_empty() || g.m2.contains(&0) {
                    return Err(Error::Config("gauss.m2 must list positive values".into()));
                }
                let mut sorted = g.m2.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != g.m2.len() {
                    return Err(Error::Config("gauss.m2 must not repeat".into()));
                }
            }
            ExperimentKind::Antenna => {
                self.antenna.scenario.validate()?;
                if let Some(snr) = self.antenna.snr_db {
                    if !snr.is_finite() {
                        return Err(Error::Config("snr_db must be finite or null".into()));
                    }
                }
            }
            ExperimentKind::Solve => {}
        }
        Ok(())
    }
}
