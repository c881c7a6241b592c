use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;

use super::noise::CorrelatedNoise;
use super::{Equilibration, SimConfig, TrialRecord, SEEDING_GRID};
use crate::density::density_grid;
use crate::error::{Error, Result};
use crate::prc::PrcShape;

/// Largest double below `2π`; wrapped phases live in `[0, 2π)`.
const BELOW_TAU: f64 = 6.283_185_307_179_585;

/// SplitMix64 finalizer.
#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of substream `index` under `master`:
/// `splitmix64(splitmix64(master) ^ index)`.
///
/// Injective in `index` for a fixed master seed. The same mixing is used for
/// sweep grid points.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index)
}

pub(crate) fn trial_rng(master: u64, index: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(trial_seed(master, index))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wrap {
    None,
    /// Crossed `2π` upwards: a spike candidate.
    Forward,
    /// Fell back below `0`.
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub theta1: f64,
    pub theta2: f64,
    pub wrap1: Wrap,
    pub wrap2: Wrap,
    /// Unwrapped phase increments of this step.
    pub increment1: f64,
    pub increment2: f64,
}

/// Euler–Maruyama update of the oscillator pair.
#[derive(Debug, Clone, Copy)]
pub struct PairStepper {
    shape: PrcShape,
    sigma: f64,
    dt: f64,
    /// `σ²/2` with the Itô correction, `0` without.
    drift_scale: f64,
    sin_alpha: f64,
    noise: CorrelatedNoise,
}

/// Resynchronization interval of the rotated `sin`/`cos` pair, in steps.
const RESYNC_STEPS: u64 = 256;

/// A phase together with `sin(θ + α)` and `cos(θ + α)`, which are advanced by
/// rotation instead of being re-evaluated every step.
#[derive(Debug, Clone, Copy)]
struct Tracked {
    theta: f64,
    sin: f64,
    cos: f64,
}

/// `(sin x, cos x)`, by Taylor series for the small arguments of a single
/// step.
#[inline]
fn small_sin_cos(x: f64) -> (f64, f64) {
    if x.abs() > 0.1 {
        return x.sin_cos();
    }
    let x2 = x * x;
    const S: [f64; 4] = [-1.0 / 6.0, 1.0 / 120.0, -1.0 / 5040.0, 1.0 / 362_880.0];
    const C: [f64; 5] = [-0.5, 1.0 / 24.0, -1.0 / 720.0, 1.0 / 40_320.0, -1.0 / 3_628_800.0];
    let sin = x + x * x2 * (S[0] + x2 * (S[1] + x2 * (S[2] + x2 * S[3])));
    let cos = 1.0 + x2 * (C[0] + x2 * (C[1] + x2 * (C[2] + x2 * (C[3] + x2 * C[4]))));
    (sin, cos)
}

impl PairStepper {
    pub fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self::with_dt(config, config.dt))
    }

    pub(crate) fn with_dt(config: &SimConfig, dt: f64) -> Self {
        let shape = PrcShape::new(config.alpha).expect("validated");
        Self {
            shape,
            sigma: config.sigma,
            dt,
            drift_scale: if config.include_ito_drift {
                0.5 * config.sigma * config.sigma
            } else {
                0.0
            },
            sin_alpha: shape.alpha().sin(),
            noise: CorrelatedNoise::new(config.c, dt),
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    #[inline]
    fn increment(&self, theta: f64, dw: f64) -> f64 {
        let delta = self.shape.delta(theta);
        let mut drift = 1.0;
        if self.drift_scale != 0.0 {
            drift += self.drift_scale * self.shape.delta_prime(theta) * delta;
        }
        self.dt * drift + self.sigma * delta * dw
    }

    fn track(&self, theta: f64) -> Tracked {
        let (sin, cos) = (theta + self.shape.alpha()).sin_cos();
        Tracked { theta, sin, cos }
    }

    /// Same update as [`PairStepper::step_with_increments`] for one phase,
    /// using the cached `sin`/`cos`.
    #[inline]
    fn advance(&self, p: &mut Tracked, dw: f64) -> (f64, Wrap) {
        let delta = self.sin_alpha - p.sin;
        let mut drift = 1.0;
        if self.drift_scale != 0.0 {
            drift -= self.drift_scale * p.cos * delta;
        }
        let increment = self.dt * drift + self.sigma * delta * dw;
        let (theta, w) = wrap(p.theta + increment);
        let (sd, cd) = small_sin_cos(increment);
        *p = Tracked {
            theta,
            sin: p.sin * cd + p.cos * sd,
            cos: p.cos * cd - p.sin * sd,
        };
        (increment, w)
    }

    /// Advance both phases with externally supplied Wiener increments.
    #[inline]
    pub fn step_with_increments(&self, state: (f64, f64), dw: (f64, f64)) -> StepOutcome {
        let increment1 = self.increment(state.0, dw.0);
        let increment2 = self.increment(state.1, dw.1);
        let (theta1, wrap1) = wrap(state.0 + increment1);
        let (theta2, wrap2) = wrap(state.1 + increment2);
        StepOutcome {
            theta1,
            theta2,
            wrap1,
            wrap2,
            increment1,
            increment2,
        }
    }

    /// Advance both phases, drawing the increments from `rng`.
    #[inline]
    pub fn step<R: Rng + ?Sized>(&self, state: (f64, f64), rng: &mut R) -> StepOutcome {
        let dw = self.noise.sample(rng);
        self.step_with_increments(state, dw)
    }
}

#[inline]
fn wrap(theta: f64) -> (f64, Wrap) {
    if theta >= TAU {
        ((theta - TAU).min(BELOW_TAU), Wrap::Forward)
    } else if theta < 0.0 {
        ((theta + TAU).min(BELOW_TAU), Wrap::Backward)
    } else {
        (theta, Wrap::None)
    }
}

pub(crate) fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Inverse-CDF sampler for the initial phase difference.
#[derive(Debug, Clone)]
pub(crate) struct PhaseDiffSampler {
    /// `cdf[k]` is the mass on `[0, 2πk/n]`, `cdf[n] = 1`.
    cdf: Vec<f64>,
}

impl PhaseDiffSampler {
    pub(crate) fn new(shape: &PrcShape, c: f64) -> Result<Self> {
        let grid = density_grid(shape, c, SEEDING_GRID)?;
        let values = grid.values();
        let n = values.len();
        let h = grid.spacing();
        let mut cdf = Vec::with_capacity(n + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        for k in 0..n {
            acc += 0.5 * h * (values[k] + values[(k + 1) % n]);
            cdf.push(acc);
        }
        for v in &mut cdf {
            *v /= acc;
        }
        Ok(Self { cdf })
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let n = self.cdf.len() - 1;
        let k = self.cdf.partition_point(|&v| v <= u).clamp(1, n) - 1;
        let (lo, hi) = (self.cdf[k], self.cdf[k + 1]);
        let frac = if hi > lo { (u - lo) / (hi - lo) } else { 0.0 };
        wrap_phase(TAU * (k as f64 + frac) / n as f64)
    }
}

/// Everything a trial needs besides its index.
pub(crate) struct TrialPlan {
    pub(crate) config: SimConfig,
    pub(crate) stepper: PairStepper,
    sampler: Option<PhaseDiffSampler>,
}

impl TrialPlan {
    pub(crate) fn new(config: &SimConfig) -> Result<Self> {
        let stepper = PairStepper::new(config)?;
        let sampler = match config.equilibration {
            Equilibration::AnalyticSeed if config.c < 1.0 => {
                Some(PhaseDiffSampler::new(&stepper.shape, config.c)?)
            }
            _ => None,
        };
        Ok(Self {
            config: *config,
            stepper,
            sampler,
        })
    }

    pub(crate) fn initial_phases<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let theta1 = wrap_phase(TAU * rng.random::<f64>());
        let phi = match (self.config.equilibration, &self.sampler) {
            (Equilibration::AnalyticSeed, Some(sampler)) => sampler.sample(rng),
            // c = 1: the stationary difference is a point mass at zero
            (Equilibration::AnalyticSeed, None) => 0.0,
            (Equilibration::BurnInOnly, _) => TAU * rng.random::<f64>(),
        };
        (theta1, wrap_phase(theta1 + phi))
    }

    /// Run trial `index`. When `sampler` is given it receives the wrapped
    /// phase difference after every full period of the window.
    pub(crate) fn run(&self, index: u64, sample_every_period: Option<&mut dyn FnMut(f64)>) -> TrialRecord {
        let mut rng = trial_rng(self.config.master_seed, index);
        let start = self.initial_phases(&mut rng);
        let noise = self.stepper.noise;
        integrate(
            &self.stepper,
            start,
            self.config.burn_in_steps(),
            self.config.window_steps(),
            || noise.sample(&mut rng),
            sample_every_period,
        )
    }
}

/// Burn in, then observe a window, with increments from `next_increments`.
pub(crate) fn integrate(
    stepper: &PairStepper,
    start: (f64, f64),
    burn_in_steps: u64,
    window_steps: u64,
    mut next_increments: impl FnMut() -> (f64, f64),
    mut sample_every_period: Option<&mut dyn FnMut(f64)>,
) -> TrialRecord {
    let mut p1 = stepper.track(start.0);
    let mut p2 = stepper.track(start.1);
    for step in 1..=burn_in_steps {
        let dw = next_increments();
        stepper.advance(&mut p1, dw.0);
        stepper.advance(&mut p2, dw.1);
        if step % RESYNC_STEPS == 0 {
            p1 = stepper.track(p1.theta);
            p2 = stepper.track(p2.theta);
        }
    }
    p1 = stepper.track(p1.theta);
    p2 = stepper.track(p2.theta);

    let period_steps = ((TAU / stepper.dt()).round() as u64).max(1);
    let (mut q1, mut q2) = (0.0, 0.0);
    // net winding number and the highest one reached, per oscillator
    let (mut w1, mut w2, mut max1, mut max2) = (0i64, 0i64, 0i64, 0i64);
    for step in 1..=window_steps {
        let dw = next_increments();
        let (inc1, wrap1) = stepper.advance(&mut p1, dw.0);
        let (inc2, wrap2) = stepper.advance(&mut p2, dw.1);
        q1 += inc1;
        q2 += inc2;
        match wrap1 {
            Wrap::Forward => {
                w1 += 1;
                max1 = max1.max(w1);
            }
            Wrap::Backward => w1 -= 1,
            Wrap::None => {}
        }
        match wrap2 {
            Wrap::Forward => {
                w2 += 1;
                max2 = max2.max(w2);
            }
            Wrap::Backward => w2 -= 1,
            Wrap::None => {}
        }
        if step % RESYNC_STEPS == 0 {
            p1 = stepper.track(p1.theta);
            p2 = stepper.track(p2.theta);
        }
        if let Some(sink) = sample_every_period.as_deref_mut() {
            if step % period_steps == 0 {
                sink(wrap_phase(p2.theta - p1.theta));
            }
        }
    }

    TrialRecord {
        spike_count_1: max1 as u64,
        spike_count_2: max2 as u64,
        total_phase_1: q1,
        total_phase_2: q2,
        spiked_1: max1 > 0,
        spiked_2: max2 > 0,
        final_phase_diff: wrap_phase(p2.theta - p1.theta),
    }
}

/// Run all trials of `config` on the current rayon pool.
pub fn run_trials(config: &SimConfig) -> Result<Vec<TrialRecord>> {
    let plan = TrialPlan::new(config)?;
    Ok((0..config.trials as u64)
        .into_par_iter()
        .map(|k| plan.run(k, None))
        .collect())
}

/// Run all trials on a dedicated pool of `workers` threads. The output does
/// not depend on `workers`.
pub fn run_trials_with_workers(config: &SimConfig, workers: usize) -> Result<Vec<TrialRecord>> {
    with_pool(workers, || run_trials(config))?
}

pub(crate) fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Err(Error::Config {
            key: "workers",
            reason: "need at least one worker".into(),
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config {
            key: "workers",
            reason: e.to_string(),
        })?;
    Ok(pool.install(f))
}
