//! Stationary density of the phase difference `φ = θ₂ − θ₁`.
//!
//! For the sinusoidal PRC family the density is `P(φ) = N / G(φ)` with
//! `G(x) = 1 − c h(x)/h(0)`, which reduces to
//!
//! ```text
//! P(φ; c, α) = √((c−1)(cos 2α − 2)(2 + (c−1) cos 2α)) / (2π (2 − c + (c−1) cos 2α − c cos φ))
//! ```
//!
//! It is a small-noise result and does not depend on the noise amplitude.

use std::f64::consts::TAU;

use crate::error::{check_correlation, Error, Result};
use crate::prc::PrcShape;
use crate::quadrature::PeriodicGrid;

/// Input noise: correlation `c` between the two drives and amplitude `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    c: f64,
    sigma: f64,
}

impl NoiseSpec {
    pub fn new(c: f64, sigma: f64) -> Result<Self> {
        check_correlation(c, true)?;
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::param("sigma", sigma, "noise amplitude must be finite and >= 0"));
        }
        Ok(Self { c, sigma })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// True when the density is a point mass (`c = 1`) and only analytic
    /// limits are available.
    pub fn is_degenerate(&self) -> bool {
        self.c == 1.0
    }
}

/// `G(x) = 1 − c h(x)/h(0)`.
pub fn g_function(shape: &PrcShape, c: f64, x: f64) -> Result<f64> {
    check_correlation(c, true)?;
    let g = 1.0 - c * shape.autocorr(x) / shape.autocorr_at_zero();
    if g <= 0.0 {
        return Err(Error::DegenerateDensity("G vanishes at zero lag when c = 1"));
    }
    Ok(g)
}

/// The shifted denominator `A = 2 − c + (c − 1) cos 2α`, so that
/// `P(φ) ∝ 1/(A − c cos φ)`.
fn shifted_denominator(shape: &PrcShape, c: f64) -> f64 {
    2.0 - c + (c - 1.0) * (2.0 * shape.alpha()).cos()
}

/// Closed-form stationary density of the phase difference.
pub fn stationary_density(shape: &PrcShape, c: f64, phi: f64) -> Result<f64> {
    check_correlation(c, false)?;
    Ok(density_unchecked(shape, c, phi))
}

#[inline]
fn density_unchecked(shape: &PrcShape, c: f64, phi: f64) -> f64 {
    if c == 0.0 {
        return 1.0 / TAU;
    }
    let cos2a = (2.0 * shape.alpha()).cos();
    let numerator = ((c - 1.0) * (cos2a - 2.0) * (2.0 + (c - 1.0) * cos2a)).sqrt();
    numerator / (TAU * (shifted_denominator(shape, c) - c * phi.cos()))
}

/// `P(0)`, the peak of the density.
pub fn peak_density(shape: &PrcShape, c: f64) -> Result<f64> {
    stationary_density(shape, c, 0.0)
}

/// Type I (`α = π/2`) density, `(√3/2π) √(c² − 4c + 3) / (3 − 2c − c cos φ)`.
pub fn type_i_density(c: f64, phi: f64) -> Result<f64> {
    check_correlation(c, false)?;
    Ok(3f64.sqrt() / TAU * (c * c - 4.0 * c + 3.0).sqrt() / (3.0 - 2.0 * c - c * phi.cos()))
}

/// Type II (`α = 0`) density, `(1/2π) √(1 − c²) / (1 − c cos φ)`.
pub fn type_ii_density(c: f64, phi: f64) -> Result<f64> {
    check_correlation(c, false)?;
    Ok((1.0 - c * c).sqrt() / (TAU * (1.0 - c * phi.cos())))
}

/// Density sampled at `φ_k = 2πk/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    grid: PeriodicGrid,
    values: Vec<f64>,
    c: f64,
    alpha: f64,
}

impl DensityGrid {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn phi(&self, k: usize) -> f64 {
        self.grid.node(k)
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Periodic trapezoid integral of the sampled density.
    pub fn total_mass(&self) -> f64 {
        crate::quadrature::periodic_trapezoid(&self.values)
    }

    /// `(φ_k, P(φ_k))` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(k, &v)| (self.phi(k), v))
    }
}

pub fn density_grid(shape: &PrcShape, c: f64, n: usize) -> Result<DensityGrid> {
    let grid = PeriodicGrid::new(n)?;
    check_correlation(c, false)?;
    let mut values: Vec<f64> = grid.nodes().map(|phi| density_unchecked(shape, c, phi)).collect();
    // cos(2πk/n) and cos(2π(n−k)/n) can differ in the last bit; pin exact evenness
    for k in 1..n / 2 {
        values[n - k] = values[k];
    }
    Ok(DensityGrid {
        grid,
        values,
        c,
        alpha: shape.alpha(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

    const C_GRID: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 0.99];

    fn alpha_grid() -> [PrcShape; 5] {
        [0.0, FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8, FRAC_PI_2].map(|a| PrcShape::new(a).unwrap())
    }

    /// `N/G(φ)` with `N` from brute-force periodic quadrature of `1/G`.
    fn reconstructed_density(shape: &PrcShape, c: f64) -> impl Fn(f64) -> f64 + '_ {
        let g = move |x: f64| 1.0 - c * shape.autocorr(x) / shape.autocorr_at_zero();
        let n = 1 << 16;
        let h = TAU / n as f64;
        let norm = 1.0 / ((0..n).map(|k| 1.0 / g(k as f64 * h)).sum::<f64>() * h);
        move |phi| norm / g(phi)
    }

    #[test]
    fn noise_spec_validation() {
        assert!(NoiseSpec::new(0.5, 0.05).is_ok());
        assert!(NoiseSpec::new(1.0, 0.05).unwrap().is_degenerate());
        assert!(NoiseSpec::new(1.01, 0.05).is_err());
        assert!(NoiseSpec::new(-0.1, 0.05).is_err());
        assert!(NoiseSpec::new(0.5, -0.05).is_err());
    }

    #[test]
    fn g_function_examples() {
        assert!((g_function(&PrcShape::type_ii(), 0.5, 0.0).unwrap() - 0.5).abs() < 1e-15);
        for shape in alpha_grid() {
            assert_eq!(g_function(&shape, 0.0, 1.234).unwrap(), 1.0);
        }
        // h(π) = π, h(0) = 3π for type I
        assert!((g_function(&PrcShape::type_i(), 0.6, PI).unwrap() - 0.8).abs() < 1e-15);
        assert!(matches!(
            g_function(&PrcShape::type_i(), 1.0, 0.0),
            Err(Error::DegenerateDensity(_))
        ));
        assert!(g_function(&PrcShape::type_i(), 1.0, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn stationary_density_examples() {
        let p = stationary_density(&PrcShape::type_ii(), 0.6, 0.0).unwrap();
        assert!((p - 1.0 / PI).abs() < 1e-14);
        for shape in alpha_grid() {
            assert_eq!(stationary_density(&shape, 0.0, 2.0).unwrap(), 1.0 / TAU);
        }
        // √1.32 / (2π · 0.6)
        let p = stationary_density(&PrcShape::type_i(), 0.8, 0.0).unwrap();
        assert!((p - 1.32f64.sqrt() / (TAU * 0.6)).abs() < 1e-14);
        assert!((p - 0.304_758_5).abs() < 1e-7);
        assert!(matches!(
            stationary_density(&PrcShape::type_i(), 1.0, 0.0),
            Err(Error::DegenerateDensity(_))
        ));
    }

    #[test]
    fn closed_form_matches_reconstruction() {
        for shape in alpha_grid() {
            for c in C_GRID {
                let oracle = reconstructed_density(&shape, c);
                for k in 0..64 {
                    let phi = k as f64 * TAU / 64.0;
                    let want = oracle(phi);
                    let got = stationary_density(&shape, c, phi).unwrap();
                    assert!(
                        ((got - want) / want).abs() < 1e-8,
                        "alpha={} c={c} phi={phi}: {got} vs {want}",
                        shape.alpha()
                    );
                }
            }
        }
    }

    #[test]
    fn endpoints_reduce_to_type_closed_forms() {
        for c in C_GRID {
            for k in 0..64 {
                let phi = k as f64 * TAU / 64.0;
                let g1 = stationary_density(&PrcShape::type_i(), c, phi).unwrap();
                let g2 = stationary_density(&PrcShape::type_ii(), c, phi).unwrap();
                assert!((g1 - type_i_density(c, phi).unwrap()).abs() < 1e-12);
                assert!((g2 - type_ii_density(c, phi).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn peak_sharpens_with_correlation() {
        for shape in alpha_grid() {
            let peaks: Vec<f64> = C_GRID.iter().map(|&c| peak_density(&shape, c).unwrap()).collect();
            assert!(peaks.windows(2).all(|w| w[1] >= w[0]), "alpha={}", shape.alpha());
        }
    }

    #[test]
    fn density_grid_examples() {
        let g = density_grid(&PrcShape::type_ii(), 0.0, 64).unwrap();
        assert!(g.values().iter().all(|&v| v == 1.0 / TAU));

        let g = density_grid(&PrcShape::type_ii(), 0.6, 256).unwrap();
        assert!((g.values()[0] - 1.0 / PI).abs() < 1e-14);

        let g = density_grid(&PrcShape::new(FRAC_PI_4).unwrap(), 0.4, 256).unwrap();
        assert!((g.total_mass() - 1.0).abs() < 1e-10);

        assert!(density_grid(&PrcShape::type_ii(), 0.5, 100).is_err());
        assert!(density_grid(&PrcShape::type_ii(), 0.5, 32).is_err());
        assert!(density_grid(&PrcShape::type_ii(), 1.0, 64).is_err());
    }

    #[test]
    fn density_grid_invariants() {
        for shape in alpha_grid() {
            for c in C_GRID {
                let g = density_grid(&shape, c, 1024).unwrap();
                assert!(g.values().iter().all(|&v| v >= 0.0));
                assert!((g.total_mass() - 1.0).abs() < 1e-10);
                let n = g.len();
                for k in 1..n {
                    assert!((g.values()[k] - g.values()[n - k]).abs() < 1e-12);
                }
                for (phi, v) in g.iter() {
                    let want = stationary_density(&shape, c, phi).unwrap();
                    assert!(((v - want) / want).abs() < 1e-12);
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn density_is_even_periodic_and_positive(
                alpha in 0.0..=FRAC_PI_2,
                c in 0.0..0.999f64,
                phi in -10.0f64..10.0,
            ) {
                let shape = PrcShape::new(alpha).unwrap();
                let p = stationary_density(&shape, c, phi).unwrap();
                prop_assert!(p > 0.0);
                let rel = |a: f64, b: f64| ((a - b) / b).abs();
                prop_assert!(rel(stationary_density(&shape, c, -phi).unwrap(), p) < 1e-12);
                prop_assert!(rel(stationary_density(&shape, c, phi + TAU).unwrap(), p) < 1e-9);
                prop_assert!(g_function(&shape, c, phi).unwrap() > 0.0);
            }
        }
    }
}
