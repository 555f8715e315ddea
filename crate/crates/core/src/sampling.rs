//! Deterministic streams of small-height rational points.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactla::Rational;

pub struct PointStream {
    rng: ChaCha8Rng,
    height: i64,
}

impl PointStream {
    pub fn new(seed: u64, height: i64) -> Self {
        PointStream { rng: ChaCha8Rng::seed_from_u64(seed), height: height.max(1) }
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn grow(&mut self) {
        self.height = self.height.saturating_mul(2);
    }

    pub fn rational(&mut self) -> Rational {
        let h = self.height;
        let n = self.rng.gen_range(-h..=h);
        let d = self.rng.gen_range(1..=h);
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn point(&mut self, dim: usize) -> Vec<Rational> {
        (0..dim).map(|_| self.rational()).collect()
    }

    pub fn small_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }
}
