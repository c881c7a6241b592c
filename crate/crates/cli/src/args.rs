use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use phasecorr::montecarlo::{DEFAULT_DT, DEFAULT_SEED, DEFAULT_TRIALS, SEEDED_BURN_IN_PERIODS, UNSEEDED_BURN_IN_PERIODS};

use crate::config::ConfigFile;
use crate::error::CliError;
use crate::expr::{parse_list, parse_value};
use crate::params::{
    DensityParams, EquilibrationMode, LongParams, Params, PrcParams, ShortParams, SimSettings,
    SimulateParams, SweepParams,
};

pub const DEFAULT_SIGMA: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(name = "phasecorr", version, about = "Output correlations of noise-driven phase oscillator pairs")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Output CSV file (a directory for `sweep`)
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Master seed for simulations
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// `key = value` config file; flags take precedence
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads for simulations [default: all cores]
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the phase response curve for several shape parameters
    Prc(PrcArgs),
    /// Stationary phase-difference density
    Density(DensityArgs),
    /// Long-window output correlation against α and c
    Long(LongArgs),
    /// Short-window (T < 2π) output correlation
    Short(ShortArgs),
    /// Monte Carlo estimate at one parameter point
    Simulate(SimulateArgs),
    /// Monte Carlo estimates over an (α, c, σ, T) grid
    Sweep(SweepArgs),
    /// Re-run the command recorded in a manifest
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct PrcArgs {
    /// Shape parameters, e.g. `0,pi/4,pi/2` or `0:pi/2:5`
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, default_value_t = 512)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Input correlations, one column each
    #[arg(long)]
    pub c: Option<String>,
    /// Grid size (power of two, at least 64)
    #[arg(long, default_value_t = 512)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct LongArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub c: Option<String>,
}

#[derive(Debug, Args)]
pub struct ShortArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub c: Option<String>,
    /// Window lengths, all inside (0, 2π)
    #[arg(long = "window", visible_alias = "T", value_name = "LIST")]
    pub window: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub c: Option<String>,
    #[arg(long)]
    pub sigma: Option<String>,
    /// Observation window in radians, e.g. `100*2pi`
    #[arg(long = "window", visible_alias = "T")]
    pub window: Option<String>,
    #[arg(long)]
    pub dt: Option<String>,
    /// Discarded time before the window, radians
    #[arg(long = "burn-in")]
    pub burn_in: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Include the σ²/2·Δ′Δ Itô drift
    #[arg(long)]
    pub ito_drift: bool,
    /// Start from uniform phases and rely on a long burn-in
    #[arg(long)]
    pub burn_in_only: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// Also write per-trial records to this CSV
    #[arg(long, value_name = "PATH")]
    pub records: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub sim: SimArgs,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

struct Resolver {
    config: ConfigFile,
}

impl Resolver {
    fn value(&self, flag: &Option<String>, key: &'static str) -> Result<Option<f64>, CliError> {
        match flag {
            Some(text) => parse_value(text).map(Some).map_err(|e| flagged(key, e)),
            None => self.config.value(key),
        }
    }

    fn list(&self, flag: &Option<String>, key: &'static str) -> Result<Option<Vec<f64>>, CliError> {
        match flag {
            Some(text) => parse_list(text).map(Some).map_err(|e| flagged(key, e)),
            None => self.config.list(key),
        }
    }

    fn list_or(&self, flag: &Option<String>, key: &'static str, default: &str) -> Result<Vec<f64>, CliError> {
        let list = match self.list(flag, key)? {
            Some(list) => list,
            None => parse_list(default)?,
        };
        if list.is_empty() {
            return Err(CliError::Usage(format!("`{key}` list is empty")));
        }
        Ok(list)
    }

    fn required_value(&self, flag: &Option<String>, key: &'static str) -> Result<f64, CliError> {
        self.value(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("`{key}` is required (flag or config key)")))
    }

    fn required_list(&self, flag: &Option<String>, key: &'static str) -> Result<Vec<f64>, CliError> {
        let list = self
            .list(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("`{key}` is required (flag or config key)")))?;
        if list.is_empty() {
            return Err(CliError::Usage(format!("`{key}` list is empty")));
        }
        Ok(list)
    }

    fn seed(&self, common: &Common) -> Result<u64, CliError> {
        Ok(match common.seed {
            Some(s) => s,
            None => self.config.integer("seed")?.unwrap_or(DEFAULT_SEED),
        })
    }

    fn settings(&self, args: &SimArgs) -> Result<SimSettings, CliError> {
        let include_ito_drift = args.ito_drift || self.config.flag("include_ito_drift")?.unwrap_or(false);
        let equilibration = if args.burn_in_only {
            EquilibrationMode::BurnInOnly
        } else {
            match self.config.raw("equilibration") {
                None | Some("analytic_seed") => EquilibrationMode::AnalyticSeed,
                Some("burn_in_only") => EquilibrationMode::BurnInOnly,
                Some(other) => {
                    return Err(CliError::Usage(format!(
                        "config key `equilibration`: `{other}` is not one of analytic_seed, burn_in_only"
                    )))
                }
            }
        };
        let default_burn_in = match equilibration {
            EquilibrationMode::AnalyticSeed => SEEDED_BURN_IN_PERIODS * TAU,
            EquilibrationMode::BurnInOnly => UNSEEDED_BURN_IN_PERIODS * TAU,
        };
        let trials = match args.trials {
            Some(t) => t,
            None => match self.config.integer("trials")? {
                Some(t) => usize::try_from(t).map_err(|_| CliError::Usage("config key `trials` is too large".into()))?,
                None => DEFAULT_TRIALS,
            },
        };
        Ok(SimSettings {
            dt: self.value(&args.dt, "dt")?.unwrap_or(DEFAULT_DT),
            burn_in: self.value(&args.burn_in, "burn_in")?.unwrap_or(default_burn_in),
            trials,
            include_ito_drift,
            equilibration,
        })
    }
}

fn flagged(key: &str, e: CliError) -> CliError {
    match e {
        CliError::Usage(msg) => CliError::Usage(format!("--{}: {msg}", key.replace('_', "-"))),
        other => other,
    }
}

fn out_or(common: &Common, default: &str) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile, CliError> {
    match path {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

/// Merge flags, config file and defaults into the parameters of one run.
/// `Replay` is handled by the caller.
pub fn resolve(common: &Common, command: &Command) -> Result<Params, CliError> {
    let r = Resolver {
        config: load_config(common.config.as_deref())?,
    };
    Ok(match command {
        Command::Prc(a) => Params::Prc(PrcParams {
            alphas: r.list_or(&a.alpha, "alpha", "0,pi/8,pi/4,3pi/8,pi/2")?,
            points: a.points,
            out: out_or(common, "prc.csv"),
        }),
        Command::Density(a) => Params::Density(DensityParams {
            alpha: r.required_value(&a.alpha, "alpha")?,
            cs: r.list_or(&a.c, "c", "0.4,0.8")?,
            n: a.n,
            out: out_or(common, "density.csv"),
        }),
        Command::Long(a) => Params::Long(LongParams {
            alphas: r.list_or(&a.alpha, "alpha", "0:pi/2:33")?,
            cs: r.list_or(&a.c, "c", "0,0.2,0.4,0.6,0.8,0.99")?,
            out: out_or(common, "long.csv"),
        }),
        Command::Short(a) => Params::Short(ShortParams {
            alpha: r.required_value(&a.alpha, "alpha")?,
            cs: r.list_or(&a.c, "c", "0.2,0.4,0.6,0.8,0.99")?,
            windows: r.list_or(&a.window, "window_T", "0.01*2pi:0.99*2pi:99")?,
            out: out_or(common, "short.csv"),
        }),
        Command::Simulate(a) => Params::Simulate(SimulateParams {
            alpha: r.required_value(&a.sim.alpha, "alpha")?,
            c: r.required_value(&a.sim.c, "c")?,
            sigma: r.value(&a.sim.sigma, "sigma")?.unwrap_or(DEFAULT_SIGMA),
            window_t: r.required_value(&a.sim.window, "window_T")?,
            seed: r.seed(common)?,
            settings: r.settings(&a.sim)?,
            records: a.records.clone(),
            out: out_or(common, "simulate.csv"),
        }),
        Command::Sweep(a) => Params::Sweep(SweepParams {
            alphas: r.required_list(&a.sim.alpha, "alpha")?,
            cs: r.required_list(&a.sim.c, "c")?,
            sigmas: r.list_or(&a.sim.sigma, "sigma", "0.05")?,
            windows: r.required_list(&a.sim.window, "window_T")?,
            seed: r.seed(common)?,
            settings: r.settings(&a.sim)?,
            out: out_or(common, "sweep"),
        }),
        Command::Replay(_) => {
            return Err(CliError::Usage("replay has no parameters of its own".into()));
        }
    })
}
