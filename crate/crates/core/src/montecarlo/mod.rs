//! Monte Carlo simulation of two phase oscillators with partially shared
//! white-noise drive:
//!
//! ```text
//! dθᵢ = (1 + drift(θᵢ)) dt + σ Δ(θᵢ) dWᵢ,   dWᵢ = √c dW_C + √(1 − c) dW_{A|B}
//! ```
//!
//! `drift` is `σ²/2 Δ′Δ` when the Itô correction is enabled and zero
//! otherwise (the equations that the analytic results are derived from keep
//! only the `O(σ)` terms).
//!
//! Every trial owns a generator seeded from `(master_seed, trial_index)` via
//! [`trial_seed`], and records are gathered by trial index, so results are
//! bit-identical for any number of worker threads.

mod estimate;
mod histogram;
mod integrator;
mod noise;

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::prc::PrcShape;

pub use estimate::{
    combined_std_error, estimate_binary_corr, estimate_spike_corr, estimate_total_phase_corr,
    estimate_with, pearson, Bootstrap, CorrelationEstimate, Estimator,
};
pub use histogram::{empirical_phase_density, PhaseHistogram, MIN_DENSITY_BINS};
pub use integrator::{run_trials, run_trials_with_workers, trial_seed, PairStepper, StepOutcome, Wrap};
pub use noise::{correlated_noise_step, CorrelatedNoise};

/// Default Euler–Maruyama step, one thousandth of a period.
pub const DEFAULT_DT: f64 = TAU * 1e-3;
/// Burn-in applied after seeding the phase difference from the analytic density.
pub const SEEDED_BURN_IN_PERIODS: f64 = 20.0;
/// Burn-in used when the phase difference starts uniform.
pub const UNSEEDED_BURN_IN_PERIODS: f64 = 200.0;
pub const DEFAULT_TRIALS: usize = 2000;
pub const DEFAULT_SEED: u64 = 0x5eed_c0de_2010_0001;
/// Grid size of the inverse-CDF table for the initial phase difference.
pub const SEEDING_GRID: usize = 4096;

/// How the initial phase difference is brought to equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Equilibration {
    /// Draw `θ₂(0) − θ₁(0)` from the stationary density, then burn in.
    AnalyticSeed,
    /// Start from independent uniform phases and rely on burn-in alone.
    BurnInOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub alpha: f64,
    pub c: f64,
    pub sigma: f64,
    /// Time step, radians.
    pub dt: f64,
    /// Discarded time before the observation window, radians.
    pub burn_in: f64,
    /// Observation window `T`, radians.
    pub window: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub include_ito_drift: bool,
    pub equilibration: Equilibration,
}

impl SimConfig {
    /// Defaults for everything except the model parameters and window.
    pub fn new(alpha: f64, c: f64, sigma: f64, window: f64) -> Self {
        Self {
            alpha,
            c,
            sigma,
            dt: DEFAULT_DT,
            burn_in: SEEDED_BURN_IN_PERIODS * TAU,
            window,
            trials: DEFAULT_TRIALS,
            master_seed: DEFAULT_SEED,
            include_ito_drift: false,
            equilibration: Equilibration::AnalyticSeed,
        }
    }

    /// Switch to uniform initial phases with the long burn-in.
    pub fn burn_in_only(mut self) -> Self {
        self.equilibration = Equilibration::BurnInOnly;
        self.burn_in = UNSEEDED_BURN_IN_PERIODS * TAU;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn shape(&self) -> Result<PrcShape> {
        PrcShape::new(self.alpha).map_err(|e| Error::Config {
            key: "alpha",
            reason: e.to_string(),
        })
    }

    /// Steps in the observation window (`T` rounded to a multiple of `dt`).
    pub fn window_steps(&self) -> u64 {
        (self.window / self.dt).round() as u64
    }

    pub fn burn_in_steps(&self) -> u64 {
        (self.burn_in / self.dt).round() as u64
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &'static str, reason: String| Err(Error::Config { key, reason });
        self.shape()?;
        if !(self.c.is_finite() && (0.0..=1.0).contains(&self.c)) {
            return bad("c", format!("input correlation {} is outside [0, 1]", self.c));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return bad("sigma", format!("noise amplitude {} must be >= 0", self.sigma));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad("dt", format!("time step {} must be > 0", self.dt));
        }
        if !(self.window.is_finite() && self.window > 0.0) {
            return bad("window_T", format!("window {} must be > 0", self.window));
        }
        if self.window < TAU && self.dt > self.window / 100.0 {
            return bad(
                "dt",
                format!(
                    "time step {} is coarser than window_T/100 = {} for a sub-period window",
                    self.dt,
                    self.window / 100.0
                ),
            );
        }
        if self.window_steps() == 0 {
            return bad("window_T", "window is shorter than one time step".into());
        }
        if !(self.burn_in.is_finite() && self.burn_in >= 0.0) {
            return bad("burn_in", format!("burn-in {} must be >= 0", self.burn_in));
        }
        if self.trials < 2 {
            return bad("trials", format!("need at least 2 trials, got {}", self.trials));
        }
        Ok(())
    }
}

/// Outcome of one trial over the observation window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub spike_count_1: u64,
    pub spike_count_2: u64,
    /// Elapsed (unwrapped) phase `qᵢ(T) = θᵢ(T) − θᵢ(0)`.
    pub total_phase_1: f64,
    pub total_phase_2: f64,
    pub spiked_1: bool,
    pub spiked_2: bool,
    /// `θ₂(T) − θ₁(T)` wrapped to `[0, 2π)`.
    pub final_phase_diff: f64,
}

impl TrialRecord {
    /// Largest `|qᵢ/2π − countᵢ|` over both oscillators.
    pub fn proxy_gap(&self) -> f64 {
        let g1 = (self.total_phase_1 / TAU - self.spike_count_1 as f64).abs();
        let g2 = (self.total_phase_2 / TAU - self.spike_count_2 as f64).abs();
        g1.max(g2)
    }
}
