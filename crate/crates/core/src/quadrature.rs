//! Quadrature rules for smooth periodic integrands and for the windowed
//! integrals that appear in the short-window spike statistics.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Uniform grid on `[0, 2π)` with a power-of-two node count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicGrid {
    n: usize,
}

impl PeriodicGrid {
    pub const MIN_NODES: usize = 64;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_NODES || !n.is_power_of_two() {
            return Err(Error::param(
                "n",
                n as f64,
                "grid size must be a power of two no smaller than 64",
            ));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n as f64
    }

    /// Node `k`, i.e. `2πk/n`.
    pub fn node(&self, k: usize) -> f64 {
        TAU * k as f64 / self.n as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.node(k))
    }

    /// Periodic trapezoid integral of `f` over one period.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.spacing() * self.nodes().map(f).sum::<f64>()
    }
}

/// Trapezoid rule on `[0, 2π)` for samples taken at `2πk/n`. On a periodic
/// domain all weights are equal.
pub fn periodic_trapezoid(samples: &[f64]) -> f64 {
    assert!(samples.len() >= 2, "need at least two samples");
    TAU / samples.len() as f64 * samples.iter().sum::<f64>()
}

/// Direct 2-D trapezoid value of
/// `(1/2π) ∫_{2π−T}^{2π} ∫_{2π−T}^{2π} P(y − x) dx dy`
/// with `n` intervals per axis.
///
/// This is the defining form of the joint spiking probability `f₁₁` and is
/// kept as an independent check on the reduced one-dimensional evaluation.
pub fn window_double_integral(density: impl Fn(f64) -> f64, window: f64, n: usize) -> f64 {
    assert!(window > 0.0 && window <= TAU, "window must lie in (0, 2pi]");
    assert!(n >= 1);
    let h = window / n as f64;
    let lo = TAU - window;
    let node = |i: usize| lo + i as f64 * h;
    let weight = |i: usize| if i == 0 || i == n { 0.5 } else { 1.0 };
    let mut total = 0.0;
    for j in 0..=n {
        let y = node(j);
        let mut row = 0.0;
        for i in 0..=n {
            row += weight(i) * density(y - node(i));
        }
        total += weight(j) * row;
    }
    total * h * h / TAU
}

/// Gauss–Legendre rule on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_a^b f` with the rule mapped onto `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }

    /// Composite rule over `panels` equal sub-intervals of `[a, b]`.
    pub fn integrate_composite(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        f: impl Fn(f64) -> f64,
    ) -> f64 {
        assert!(panels >= 1);
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + p as f64 * width;
                let hi = if p + 1 == panels { b } else { lo + width };
                self.integrate(lo, hi, &f)
            })
            .sum()
    }
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = order as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn type_ii_density(c: f64) -> impl Fn(f64) -> f64 {
        move |phi: f64| (1.0 - c * c).sqrt() / (TAU * (1.0 - c * phi.cos()))
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(PeriodicGrid::new(32).is_err());
        assert!(PeriodicGrid::new(100).is_err());
        assert!(PeriodicGrid::new(64).is_ok());
        let g = PeriodicGrid::new(1024).unwrap();
        assert_eq!(g.spacing() * g.len() as f64, TAU);
    }

    #[test]
    fn trapezoid_examples() {
        for n in [2, 3, 64, 1000] {
            let s = vec![1.0 / TAU; n];
            assert!((periodic_trapezoid(&s) - 1.0).abs() < 1e-14);
        }
        let g = PeriodicGrid::new(64).unwrap();
        let cosines: Vec<f64> = g.nodes().map(f64::cos).collect();
        assert!(periodic_trapezoid(&cosines).abs() < 1e-14);

        let g = PeriodicGrid::new(4096).unwrap();
        let p = type_ii_density(0.6);
        let samples: Vec<f64> = g.nodes().map(p).collect();
        assert!((periodic_trapezoid(&samples) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn trapezoid_converges_spectrally() {
        for c in [0.2, 0.6, 0.9, 0.99] {
            let p = type_ii_density(c);
            for n in [1024, 2048, 4096] {
                let coarse = PeriodicGrid::new(n).unwrap().integrate(&p);
                let fine = PeriodicGrid::new(2 * n).unwrap().integrate(&p);
                assert!((coarse - fine).abs() < 1e-12, "c={c} n={n}");
            }
        }
    }

    #[test]
    fn window_double_integral_uniform() {
        let uniform = |_: f64| 1.0 / TAU;
        assert!((window_double_integral(uniform, PI, 16) - 0.25).abs() < 1e-14);
        assert!((window_double_integral(uniform, TAU, 16) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for order in [1, 2, 5, 16, 20, 33] {
            let gl = GaussLegendre::new(order);
            assert!((gl.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let degree = 2 * order - 1;
            let exact = if degree % 2 == 0 { 2.0 / (degree as f64 + 1.0) } else { 0.0 };
            let got = gl.integrate(-1.0, 1.0, |x| x.powi(degree as i32));
            assert!((got - exact).abs() < 1e-13, "order {order}");
            let even = degree - 1;
            let got = gl.integrate(-1.0, 1.0, |x| x.powi(even as i32));
            assert!((got - 2.0 / (even as f64 + 1.0)).abs() < 1e-13, "order {order}");
        }
    }

    #[test]
    fn composite_gauss_legendre() {
        let gl = GaussLegendre::new(20);
        let got = gl.integrate_composite(0.0, 3.0, 7, f64::exp);
        assert!((got - (3.0f64.exp() - 1.0)).abs() < 1e-12);
    }
}
