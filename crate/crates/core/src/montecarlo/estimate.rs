use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::TrialRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// Pearson correlation of spike counts.
    PearsonCounts,
    /// Pearson correlation of elapsed phases `q₁(T), q₂(T)`.
    PearsonTotalPhase,
    /// Phi coefficient of the "spiked in window" indicators.
    PhiBinary,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::PearsonCounts => "pearson_counts",
            Estimator::PearsonTotalPhase => "pearson_total_phase",
            Estimator::PhiBinary => "phi_binary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationEstimate {
    pub value: f64,
    /// Bootstrap standard error.
    pub std_error: f64,
    pub n: usize,
    pub estimator: Estimator,
}

/// Nonparametric bootstrap over trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bootstrap {
    pub resamples: usize,
    pub seed: u64,
}

impl Default for Bootstrap {
    fn default() -> Self {
        Self {
            resamples: 200,
            seed: 0xb007_57a9,
        }
    }
}

impl Bootstrap {
    /// Standard deviation of the Pearson correlation over resamples. Resamples
    /// with zero variance are skipped.
    pub fn std_error(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(self.seed);
        let mut idx = vec![0usize; n];
        let mut stats = Vec::with_capacity(self.resamples);
        let (mut xs, mut ys) = (vec![0.0; n], vec![0.0; n]);
        for _ in 0..self.resamples {
            for i in idx.iter_mut() {
                *i = rng.random_range(0..n);
            }
            for (k, &i) in idx.iter().enumerate() {
                xs[k] = x[i];
                ys[k] = y[i];
            }
            if let Ok(r) = pearson(&xs, &ys) {
                stats.push(r);
            }
        }
        if stats.len() < 2 {
            return f64::NAN;
        }
        let m = stats.iter().sum::<f64>() / stats.len() as f64;
        let v = stats.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (stats.len() - 1) as f64;
        v.sqrt()
    }
}

/// Sample Pearson correlation. Fails when either sample has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DegenerateStatistics(format!(
            "sample lengths differ ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::DegenerateStatistics("need at least two samples".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxx += da * da;
        syy += db * db;
        sxy += da * db;
    }
    let scale = mx.abs().max(my.abs()).max(1.0);
    let tiny = 1e-24 * scale * scale * n;
    if sxx <= tiny || syy <= tiny {
        return Err(Error::DegenerateStatistics(
            "zero variance in one of the samples".into(),
        ));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn columns(records: &[TrialRecord], estimator: Estimator) -> (Vec<f64>, Vec<f64>) {
    let pick = |r: &TrialRecord| match estimator {
        Estimator::PearsonCounts => (r.spike_count_1 as f64, r.spike_count_2 as f64),
        Estimator::PearsonTotalPhase => (r.total_phase_1, r.total_phase_2),
        Estimator::PhiBinary => (r.spiked_1 as u8 as f64, r.spiked_2 as u8 as f64),
    };
    records.iter().map(pick).unzip()
}

pub fn estimate_with(
    records: &[TrialRecord],
    estimator: Estimator,
    bootstrap: &Bootstrap,
) -> Result<CorrelationEstimate> {
    let (x, y) = columns(records, estimator);
    let value = pearson(&x, &y).map_err(|e| match e {
        Error::DegenerateStatistics(msg) => {
            Error::DegenerateStatistics(format!("{}: {msg}", estimator.name()))
        }
        other => other,
    })?;
    Ok(CorrelationEstimate {
        value,
        std_error: bootstrap.std_error(&x, &y),
        n: records.len(),
        estimator,
    })
}

pub fn estimate_spike_corr(records: &[TrialRecord]) -> Result<CorrelationEstimate> {
    estimate_with(records, Estimator::PearsonCounts, &Bootstrap::default())
}

pub fn estimate_total_phase_corr(records: &[TrialRecord]) -> Result<CorrelationEstimate> {
    estimate_with(records, Estimator::PearsonTotalPhase, &Bootstrap::default())
}

pub fn estimate_binary_corr(records: &[TrialRecord]) -> Result<CorrelationEstimate> {
    estimate_with(records, Estimator::PhiBinary, &Bootstrap::default())
}

/// `√(se_a² + se_b²)` for comparing two independent estimates.
pub fn combined_std_error(a: &CorrelationEstimate, b: &CorrelationEstimate) -> f64 {
    a.std_error.hypot(b.std_error)
}
