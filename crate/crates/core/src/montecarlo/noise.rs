use rand::Rng;
use rand_distr::StandardNormal;

/// Wiener increments `(dW₁, dW₂)` over a step `dt` built from three
/// independent normals: `dWᵢ = √dt (√c z_C + √(1 − c) z_{A|B})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatedNoise {
    shared: f64,
    private: f64,
}

impl CorrelatedNoise {
    pub fn new(c: f64, dt: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&c) && dt > 0.0);
        let sqrt_dt = dt.sqrt();
        Self {
            shared: sqrt_dt * c.sqrt(),
            private: sqrt_dt * (1.0 - c).sqrt(),
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let za: f64 = rng.sample(StandardNormal);
        let zb: f64 = rng.sample(StandardNormal);
        let zc: f64 = rng.sample(StandardNormal);
        let common = self.shared * zc;
        (common + self.private * za, common + self.private * zb)
    }
}

/// One pair of correlated increments; see [`CorrelatedNoise`].
pub fn correlated_noise_step<R: Rng + ?Sized>(c: f64, dt: f64, rng: &mut R) -> (f64, f64) {
    CorrelatedNoise::new(c, dt).sample(rng)
}
