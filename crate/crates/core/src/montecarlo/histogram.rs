use std::f64::consts::TAU;

use rayon::prelude::*;

use super::integrator::TrialPlan;
use super::SimConfig;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

pub const MIN_DENSITY_BINS: usize = 32;

/// Histogram of wrapped phase differences on `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseHistogram {
    counts: Vec<u64>,
}

impl PhaseHistogram {
    pub fn new(bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::Config {
                key: "bins",
                reason: "need at least one bin".into(),
            });
        }
        Ok(Self {
            counts: vec![0; bins],
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        TAU / self.bins() as f64
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_center(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.width()
    }

    pub fn add(&mut self, phi: f64) {
        let k = ((phi.rem_euclid(TAU) / self.width()) as usize).min(self.bins() - 1);
        self.counts[k] += 1;
    }

    pub fn merge(&mut self, other: &PhaseHistogram) {
        assert_eq!(self.bins(), other.bins(), "bin counts differ");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Normalized density estimate per bin.
    pub fn density(&self) -> Vec<f64> {
        let scale = 1.0 / (self.total() as f64 * self.width());
        self.counts.iter().map(|&m| m as f64 * scale).collect()
    }

    /// Probability that `density` assigns to each bin.
    pub fn bin_masses(&self, density: impl Fn(f64) -> f64) -> Vec<f64> {
        let gl = GaussLegendre::new(8);
        let w = self.width();
        (0..self.bins())
            .map(|k| gl.integrate(k as f64 * w, (k + 1) as f64 * w, &density))
            .collect()
    }

    /// `Σ |empirical mass − model mass|` over bins.
    pub fn l1_distance(&self, density: impl Fn(f64) -> f64) -> f64 {
        let n = self.total() as f64;
        self.bin_masses(density)
            .iter()
            .zip(&self.counts)
            .map(|(p, &m)| (m as f64 / n - p).abs())
            .sum()
    }

    /// Pearson χ² statistic against `density`, with `bins − 1` degrees of
    /// freedom.
    pub fn chi_square(&self, density: impl Fn(f64) -> f64) -> f64 {
        let n = self.total() as f64;
        self.bin_masses(density)
            .iter()
            .zip(&self.counts)
            .map(|(p, &m)| {
                let e = n * p;
                (m as f64 - e).powi(2) / e
            })
            .sum()
    }
}

/// Histogram of `θ₂ − θ₁`, sampled once per period of the observation window
/// across all trials of `config`.
pub fn empirical_phase_density(config: &SimConfig, bins: usize) -> Result<PhaseHistogram> {
    if bins < MIN_DENSITY_BINS {
        return Err(Error::Config {
            key: "bins",
            reason: format!("need at least {MIN_DENSITY_BINS} bins, got {bins}"),
        });
    }
    let empty = PhaseHistogram::new(bins)?;
    let plan = TrialPlan::new(config)?;
    let hist = (0..config.trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut h = empty.clone();
            let mut sink = |phi: f64| h.add(phi);
            plan.run(k, Some(&mut sink));
            h
        })
        .reduce(
            || empty.clone(),
            |mut a, b| {
                a.merge(&b);
                a
            },
        );
    if hist.total() == 0 {
        return Err(Error::Config {
            key: "window_T",
            reason: "window shorter than one period; no samples taken".into(),
        });
    }
    Ok(hist)
}
