//! Seeded standard-normal source.
//!
//! Uniforms come from ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`),
//! which is fully specified and platform independent. Gaussians use the
//! basic Box–Muller transform: for `u1 ∈ (0, 1]`, `u2 ∈ [0, 1)`,
//! `r = √(−2 ln u1)` yields the pair `(r cos 2πu2, r sin 2πu2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[derive(Debug, Clone)]
pub struct GaussianSource {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.rng.gen::<f64>();
        let u2 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Complex standard normal: independent real and imaginary parts with
    /// variance 1/2 each.
    pub fn next_complex(&mut self) -> Complex64 {
        let re = self.next_gaussian();
        let im = self.next_gaussian();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}
