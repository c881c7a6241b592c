//! Independent numerical oracles for the acceptance checks in
//! `tests/acceptance.rs`. Nothing here calls into the library's own
//! quadrature or closed forms beyond the PRC autocorrelation `h`.

use std::f64::consts::TAU;

use phasecorr::PrcShape;

/// `P(φ) = N / G(φ)` with `G = 1 − c·h(φ)/h(0)` and `N` from brute-force
/// periodic trapezoid quadrature of `1/G` on `2^16` nodes.
pub struct ReconstructedDensity {
    shape: PrcShape,
    c: f64,
    norm: f64,
}

impl ReconstructedDensity {
    pub fn new(shape: PrcShape, c: f64) -> Self {
        let mut d = Self { shape, c, norm: 1.0 };
        let n = 1usize << 16;
        let h = TAU / n as f64;
        let inv_mass: f64 = (0..n).map(|k| 1.0 / d.g(k as f64 * h)).sum::<f64>() * h;
        d.norm = 1.0 / inv_mass;
        d
    }

    fn g(&self, x: f64) -> f64 {
        1.0 - self.c * self.shape.autocorr(x) / self.shape.autocorr_at_zero()
    }

    pub fn eval(&self, phi: f64) -> f64 {
        self.norm / self.g(phi)
    }
}

/// `(1/2π) ∫∫_{[0,T]²} P(y − x) dx dy` by the 2-D trapezoid rule on an
/// `n × n` grid.
pub fn trapezoid_f11(density: impl Fn(f64) -> f64, window: f64, n: usize) -> f64 {
    let h = window / n as f64;
    let w = |k: usize| if k == 0 || k == n { 0.5 } else { 1.0 };
    let mut total = 0.0;
    for j in 0..=n {
        let x = j as f64 * h;
        let mut row = 0.0;
        for k in 0..=n {
            row += w(k) * density(k as f64 * h - x);
        }
        total += w(j) * row;
    }
    total * h * h / TAU
}

/// Two Richardson steps over `n`, `2n`, `4n` on top of [`trapezoid_f11`].
pub fn direct_f11(density: impl Fn(f64) -> f64, window: f64, n: usize) -> f64 {
    let a = trapezoid_f11(&density, window, n);
    let b = trapezoid_f11(&density, window, 2 * n);
    let c = trapezoid_f11(&density, window, 4 * n);
    let r1 = (4.0 * b - a) / 3.0;
    let r2 = (4.0 * c - b) / 3.0;
    (16.0 * r2 - r1) / 15.0
}
