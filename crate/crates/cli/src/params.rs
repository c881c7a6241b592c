//! Fully resolved command parameters. These are what a manifest records and
//! what `replay` re-executes.

use std::path::PathBuf;

use phasecorr::montecarlo::{Equilibration, SimConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibrationMode {
    AnalyticSeed,
    BurnInOnly,
}

impl From<EquilibrationMode> for Equilibration {
    fn from(m: EquilibrationMode) -> Self {
        match m {
            EquilibrationMode::AnalyticSeed => Equilibration::AnalyticSeed,
            EquilibrationMode::BurnInOnly => Equilibration::BurnInOnly,
        }
    }
}

/// Simulation settings shared by every point of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSettings {
    pub dt: f64,
    pub burn_in: f64,
    pub trials: usize,
    pub include_ito_drift: bool,
    pub equilibration: EquilibrationMode,
}

impl SimSettings {
    pub fn config(&self, alpha: f64, c: f64, sigma: f64, window: f64, seed: u64) -> SimConfig {
        SimConfig {
            alpha,
            c,
            sigma,
            dt: self.dt,
            burn_in: self.burn_in,
            window,
            trials: self.trials,
            master_seed: seed,
            include_ito_drift: self.include_ito_drift,
            equilibration: self.equilibration.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrcParams {
    pub alphas: Vec<f64>,
    pub points: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityParams {
    pub alpha: f64,
    pub cs: Vec<f64>,
    pub n: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LongParams {
    pub alphas: Vec<f64>,
    pub cs: Vec<f64>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortParams {
    pub alpha: f64,
    pub cs: Vec<f64>,
    pub windows: Vec<f64>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateParams {
    pub alpha: f64,
    pub c: f64,
    pub sigma: f64,
    pub window_t: f64,
    pub seed: u64,
    pub settings: SimSettings,
    pub records: Option<PathBuf>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub alphas: Vec<f64>,
    pub cs: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub windows: Vec<f64>,
    pub seed: u64,
    pub settings: SimSettings,
    /// Output directory.
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Params {
    Prc(PrcParams),
    Density(DensityParams),
    Long(LongParams),
    Short(ShortParams),
    Simulate(SimulateParams),
    Sweep(SweepParams),
}

impl Params {
    pub fn command(&self) -> &'static str {
        match self {
            Params::Prc(_) => "prc",
            Params::Density(_) => "density",
            Params::Long(_) => "long",
            Params::Short(_) => "short",
            Params::Simulate(_) => "simulate",
            Params::Sweep(_) => "sweep",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Params::Simulate(p) => Some(p.seed),
            Params::Sweep(p) => Some(p.seed),
            _ => None,
        }
    }

    pub fn out(&self) -> &PathBuf {
        match self {
            Params::Prc(p) => &p.out,
            Params::Density(p) => &p.out,
            Params::Long(p) => &p.out,
            Params::Short(p) => &p.out,
            Params::Simulate(p) => &p.out,
            Params::Sweep(p) => &p.out,
        }
    }

    pub fn out_is_dir(&self) -> bool {
        matches!(self, Params::Sweep(_))
    }

    /// Redirect all outputs under a new `--out`.
    pub fn relocate(&mut self, out: PathBuf) {
        if let Params::Simulate(p) = self {
            if let Some(records) = &p.records {
                let name = records.file_name().map(PathBuf::from).unwrap_or_else(|| "records.csv".into());
                let dir = out.parent().map(PathBuf::from).unwrap_or_default();
                p.records = Some(dir.join(name));
            }
        }
        match self {
            Params::Prc(p) => p.out = out,
            Params::Density(p) => p.out = out,
            Params::Long(p) => p.out = out,
            Params::Short(p) => p.out = out,
            Params::Simulate(p) => p.out = out,
            Params::Sweep(p) => p.out = out,
        }
    }
}
