//! Seeded generator for random rod profiles.
//!
//! A 64-bit linear congruential generator with Knuth's MMIX constants keeps
//! the verification suites reproducible across implementations: the top 53
//! bits of each state give a uniform double in `[0, 1)`.

use crate::shape::ShapeFunction;

const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
const INCREMENT: u64 = 1_442_695_040_888_963_407;

#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn uniform_int(&mut self, lo: u64, hi: u64) -> u64 {
        lo + ((self.next_f64() * (hi - lo + 1) as f64) as u64).min(hi - lo)
    }

    /// Log-uniform in `[lo, hi)`.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo * (hi / lo).powf(self.next_f64())
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

pub const MIN_SEGMENTS: u64 = 2;
pub const MAX_SEGMENTS: u64 = 8;
pub const MIN_VALUE: f64 = 0.5;
pub const MAX_VALUE: f64 = 4.0;

/// Values of a random piecewise profile: 2 to 8 entries, log-uniform in `[0.5, 4]`.
pub fn random_values(rng: &mut Lcg64) -> Vec<f64> {
    let k = rng.uniform_int(MIN_SEGMENTS, MAX_SEGMENTS) as usize;
    random_values_n(rng, k)
}

/// `k` log-uniform values in `[0.5, 4]`.
pub fn random_values_n(rng: &mut Lcg64, k: usize) -> Vec<f64> {
    (0..k).map(|_| rng.log_uniform(MIN_VALUE, MAX_VALUE)).collect()
}

/// Random piecewise-constant profile on equal segments of `[0, length]`.
pub fn random_piecewise(rng: &mut Lcg64, length: f64) -> ShapeFunction {
    ShapeFunction::piecewise_uniform(length, random_values(rng))
        .expect("generated values lie in [0.5, 4]")
}
