//! Output correlation of the total phase over long observation windows.
//!
//! To lowest order in the noise amplitude the correlation of the elapsed
//! phases `q₁(T), q₂(T)` is independent of `T`:
//!
//! ```text
//! c_out = ∫₀^{2π} P(φ) c h(φ)/h(0) dφ
//! ```
//!
//! For long windows the elapsed phase over `2π` and the spike count differ by
//! at most one, so `c_out` is also the long-window spike-count correlation.

use crate::density::stationary_density;
use crate::error::{check_correlation, Result};
use crate::prc::PrcShape;
use crate::quadrature::PeriodicGrid;

/// Node count of the periodic trapezoid rule used by [`cout_long`].
pub const LONG_TIME_NODES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LongTimeMethod {
    Quadrature,
    ClosedFormTypeI,
    ClosedFormTypeII,
    SmallCExpansion,
    /// `c = 1`: identical drives give identical phases, `c_out = 1`.
    PerfectCorrelationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongTimeResult {
    pub c_out: f64,
    pub method: LongTimeMethod,
    pub c: f64,
    pub alpha: f64,
}

/// Long-window output correlation by periodic-trapezoid quadrature.
pub fn cout_long(shape: &PrcShape, c: f64) -> Result<LongTimeResult> {
    check_correlation(c, true)?;
    if c == 1.0 {
        return Ok(LongTimeResult {
            c_out: 1.0,
            method: LongTimeMethod::PerfectCorrelationLimit,
            c,
            alpha: shape.alpha(),
        });
    }
    let grid = PeriodicGrid::new(LONG_TIME_NODES)?;
    let h0 = shape.autocorr_at_zero();
    let integral = grid.integrate(|phi| {
        // c < 1 was checked above
        let p = stationary_density(shape, c, phi).unwrap_or(0.0);
        p * shape.autocorr(phi) / h0
    });
    Ok(LongTimeResult {
        c_out: (c * integral).clamp(0.0, 1.0),
        method: LongTimeMethod::Quadrature,
        c,
        alpha: shape.alpha(),
    })
}

/// Type I closed form `1 − (1/3)√(3 (c − 3)(c − 1))`.
pub fn cout_long_closed_type_i(c: f64) -> Result<f64> {
    check_correlation(c, true)?;
    Ok(1.0 - (3.0 * (c - 3.0) * (c - 1.0)).sqrt() / 3.0)
}

/// Type II closed form `1 − √(1 − c²)`.
pub fn cout_long_closed_type_ii(c: f64) -> Result<f64> {
    check_correlation(c, true)?;
    Ok(1.0 - (1.0 - c * c).sqrt())
}

/// The closed form for `shape` when it is one of the two endpoints of the
/// family, `None` otherwise.
pub fn cout_long_closed(shape: &PrcShape, c: f64) -> Result<Option<LongTimeResult>> {
    let (c_out, method) = if shape.alpha() == PrcShape::TYPE_I_ALPHA {
        (cout_long_closed_type_i(c)?, LongTimeMethod::ClosedFormTypeI)
    } else if shape.alpha() == PrcShape::TYPE_II_ALPHA {
        (cout_long_closed_type_ii(c)?, LongTimeMethod::ClosedFormTypeII)
    } else {
        return Ok(None);
    };
    Ok(Some(LongTimeResult {
        c_out,
        method,
        c,
        alpha: shape.alpha(),
    }))
}

/// First-order expansion in the input correlation,
/// `2c sin²α / (2 + c − (1 + c) cos 2α)`.
///
/// Vanishes identically for the type II curve because `∫h = 0` there.
pub fn cout_long_small_c(shape: &PrcShape, c: f64) -> Result<f64> {
    check_correlation(c, true)?;
    let s = shape.alpha().sin();
    Ok(2.0 * c * s * s / (2.0 + c - (1.0 + c) * (2.0 * shape.alpha()).cos()))
}
