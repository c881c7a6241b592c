//! Spike-count correlation over windows shorter than one period.
//!
//! For `T < 2π` each oscillator fires at most once, so the count correlation
//! is the correlation of the binary indicators `X, Y` ("oscillator fired in
//! the window"). With `θ₁(0)` uniform and `θ₂(0) − θ₁(0) ~ P`, the joint
//! firing probability is
//!
//! ```text
//! f₁₁(T) = (1/2π) ∫∫_{[2π−T, 2π]²} P(y − x) dx dy = (1/2π) ∫_{−T}^{T} (T − |u|) P(u) du
//! ```
//!
//! and `Cor[X, Y] = (f₁₁ − (T/2π)²) / ((T/2π)(1 − T/2π))`.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use crate::density::{peak_density, stationary_density};
use crate::error::{check_correlation, Error, Result};
use crate::prc::PrcShape;
use crate::quadrature::GaussLegendre;

const GL_ORDER: usize = 20;
const MIN_PANELS: usize = 16;
const MAX_PANELS: usize = 1 << 16;

fn gauss_legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(GL_ORDER))
}

/// Joint probabilities of firing (`1`) or not (`0`) within a window of
/// length `window`; the first index is oscillator 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSpikeProbs {
    pub f00: f64,
    pub f01: f64,
    pub f10: f64,
    pub f11: f64,
    pub window: f64,
    /// `f₁₁ − (T/2π)²`, kept separately so the correlation does not suffer
    /// cancellation for small windows.
    excess: f64,
}

impl JointSpikeProbs {
    /// Marginal firing probability `T/2π`.
    pub fn marginal(&self) -> f64 {
        self.window / TAU
    }

    pub fn covariance(&self) -> f64 {
        self.excess
    }

    pub fn correlation(&self) -> f64 {
        let m = self.marginal();
        self.excess / (m * (1.0 - m))
    }
}

fn check_window(window: f64) -> Result<()> {
    if !window.is_finite() || window <= 0.0 || window >= TAU {
        return Err(Error::param(
            "T",
            window,
            "short-window statistics need 0 < T < 2pi",
        ));
    }
    Ok(())
}

/// Number of Gauss–Legendre panels on `[0, T]`. The density is analytic
/// with poles at `±i·acosh(A/c)` (mod 2π); panels are kept no wider than
/// twice that distance so each panel converges geometrically.
fn panel_count(shape: &PrcShape, c: f64, window: f64) -> usize {
    if c == 0.0 {
        return 1;
    }
    let a = 2.0 - c + (c - 1.0) * (2.0 * shape.alpha()).cos();
    let pole_distance = (a / c).acosh();
    let panels = (window / (2.0 * pole_distance)).ceil() as usize;
    panels.clamp(MIN_PANELS, MAX_PANELS)
}

/// `f₁₁ − (T/2π)² = (1/π) ∫₀^T (T − u)(P(u) − 1/2π) du`.
fn coincidence_excess(shape: &PrcShape, c: f64, window: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    let panels = panel_count(shape, c, window);
    let uniform = 1.0 / TAU;
    let integral = gauss_legendre().integrate_composite(0.0, window, panels, |u| {
        let p = stationary_density(shape, c, u).unwrap_or(uniform);
        (window - u) * (p - uniform)
    });
    integral / PI
}

pub fn joint_spike_probs(shape: &PrcShape, c: f64, window: f64) -> Result<JointSpikeProbs> {
    check_window(window)?;
    check_correlation(c, false)?;
    let m = window / TAU;
    let excess = coincidence_excess(shape, c, window);
    let f11 = m * m + excess;
    let f10 = m - f11;
    Ok(JointSpikeProbs {
        f00: 1.0 - 2.0 * f10 - f11,
        f01: f10,
        f10,
        f11,
        window,
        excess,
    })
}

/// Short-window spike-count correlation.
pub fn cout_short(shape: &PrcShape, c: f64, window: f64) -> Result<f64> {
    Ok(joint_spike_probs(shape, c, window)?.correlation())
}

/// Initial slope `d c_out/dT` at `T = 0`, equal to `P(0) − 1/2π`.
pub fn cout_short_slope(shape: &PrcShape, c: f64) -> Result<f64> {
    Ok(peak_density(shape, c)? - 1.0 / TAU)
}

/// Ratio of the type II to the type I initial slope; tends to 3 as `c → 0`.
pub fn susceptibility_ratio(c: f64) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::param("c", c, "susceptibility ratio needs 0 < c < 1"));
    }
    if c < 1e-12 {
        return Err(Error::DegenerateStatistics(format!(
            "type I slope underflows at c = {c:e}"
        )));
    }
    let type_ii = cout_short_slope(&PrcShape::type_ii(), c)?;
    let type_i = cout_short_slope(&PrcShape::type_i(), c)?;
    if type_i <= 0.0 {
        return Err(Error::DegenerateStatistics(format!(
            "type I slope vanishes at c = {c:e}"
        )));
    }
    Ok(type_ii / type_i)
}
