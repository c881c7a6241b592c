//! Sinusoidal phase resetting curve family.
//!
//! `Δ(θ; α) = −sin(θ + α) + sin α` interpolates between the type II curve
//! `−sin θ` at `α = 0` and the type I curve `1 − cos θ` at `α = π/2`. The
//! unperturbed period is `2π` throughout the crate.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};

/// Shape parameter of the PRC family, `α ∈ [0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrcShape {
    alpha: f64,
    sin_alpha: f64,
}

impl PrcShape {
    /// Type I (SNIC) curve, `1 − cos θ`.
    pub const TYPE_I_ALPHA: f64 = FRAC_PI_2;
    /// Type II (Hopf) curve, `−sin θ`.
    pub const TYPE_II_ALPHA: f64 = 0.0;

    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || !(0.0..=FRAC_PI_2).contains(&alpha) {
            return Err(Error::param("alpha", alpha, "PRC shape must lie in [0, pi/2]"));
        }
        Ok(Self {
            alpha,
            sin_alpha: alpha.sin(),
        })
    }

    pub fn type_i() -> Self {
        Self::new(Self::TYPE_I_ALPHA).expect("pi/2 is in range")
    }

    pub fn type_ii() -> Self {
        Self::new(Self::TYPE_II_ALPHA).expect("0 is in range")
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `Δ(θ) = −sin(θ + α) + sin α`.
    #[inline]
    pub fn delta(&self, theta: f64) -> f64 {
        -(theta + self.alpha).sin() + self.sin_alpha
    }

    /// `Δ′(θ) = −cos(θ + α)`.
    #[inline]
    pub fn delta_prime(&self, theta: f64) -> f64 {
        -(theta + self.alpha).cos()
    }

    /// PRC autocorrelation `h(x) = ∫₀^{2π} Δ(y) Δ(y + x) dy = π cos x + 2π sin²α`.
    #[inline]
    pub fn autocorr(&self, x: f64) -> f64 {
        PI * x.cos() + TAU * self.sin_alpha * self.sin_alpha
    }

    /// `h(0) = π (1 + 2 sin²α)`, the mean-square PRC times `2π`.
    #[inline]
    pub fn autocorr_at_zero(&self) -> f64 {
        PI * (1.0 + 2.0 * self.sin_alpha * self.sin_alpha)
    }

    /// `∫₀^{2π} h(x) dx = 4π² sin²α`; zero exactly for the type II curve.
    pub fn autocorr_integral(&self) -> f64 {
        4.0 * PI * PI * self.sin_alpha * self.sin_alpha
    }
}
