//! Deterministic random sources for generators and verification suites.
//!
//! All randomness flows through ChaCha8, a counter-based stream cipher RNG
//! with identical output on every platform. A suite run with seed `s` gives
//! trial `i` its own independent substream (`set_stream(i)`), so trials can
//! be evaluated in any order, or in parallel, without changing a single
//! drawn number.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::spinor::{C64, SpacetimePoint};

/// Seeded, stream-indexed random source.
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Substream `index` of the generator keyed by `seed`.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Standard complex Gaussian: independent N(0,1) real and imaginary parts.
    pub fn c_gauss(&mut self) -> C64 {
        let re: f64 = self.inner.sample(StandardNormal);
        let im: f64 = self.inner.sample(StandardNormal);
        C64::new(re, im)
    }

    pub fn spinor(&mut self) -> [C64; 2] {
        [self.c_gauss(), self.c_gauss()]
    }

    /// Gaussian spinor resampled until its norm is at least `min_norm`.
    pub fn spinor_min_norm(&mut self, min_norm: f64) -> [C64; 2] {
        loop {
            let s = self.spinor();
            if crate::spinor::vec2_norm_sq(s) >= min_norm * min_norm {
                return s;
            }
        }
    }

    pub fn matrix(&mut self) -> SpacetimePoint {
        SpacetimePoint::new([
            [self.c_gauss(), self.c_gauss()],
            [self.c_gauss(), self.c_gauss()],
        ])
    }

    /// Gaussian matrix resampled until `|det| >= min_det`.
    pub fn invertible_matrix(&mut self, min_det: f64) -> SpacetimePoint {
        loop {
            let m = self.matrix();
            if m.det().norm() >= min_det {
                return m;
            }
        }
    }

    /// Complex number uniform on the disc of the given radius.
    pub fn in_disc(&mut self, radius: f64) -> C64 {
        loop {
            let re: f64 = self.inner.gen_range(-1.0..1.0);
            let im: f64 = self.inner.gen_range(-1.0..1.0);
            if re * re + im * im <= 1.0 {
                return C64::new(radius * re, radius * im);
            }
        }
    }

    pub fn gen_range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        self.inner.gen_range(lo..hi)
    }
}
