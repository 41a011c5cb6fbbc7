//! Deterministic sampling of random operators for property checks and the
//! stability audit. A small self-contained generator keeps every report
//! reproducible from its recorded seed.

use num_complex::Complex64;

use crate::matrix::{c64, Matrix2};

/// SplitMix64: tiny, seedable, and good enough for sampling test operators.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on [−1, 1].
    pub fn next_signed(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }
}

/// Uniformly distributed point of the closed complex unit disc.
pub fn complex_in_unit_disc(rng: &mut SplitMix64) -> Complex64 {
    let radius = rng.next_f64().sqrt();
    let angle = core::f64::consts::TAU * rng.next_f64();
    c64(radius * angle.cos(), radius * angle.sin())
}

/// Matrix with all four entries uniform on the complex unit disc.
pub fn random_matrix(rng: &mut SplitMix64) -> Matrix2 {
    Matrix2::new([
        [complex_in_unit_disc(rng), complex_in_unit_disc(rng)],
        [complex_in_unit_disc(rng), complex_in_unit_disc(rng)],
    ])
}

/// Hermitian part of a [`random_matrix`] draw.
pub fn random_hermitian(rng: &mut SplitMix64) -> Matrix2 {
    random_matrix(rng).hermitized()
}

/// Random diagonal Hermitian matrix: the generic gauge-invariant observable.
pub fn random_gauge_invariant(rng: &mut SplitMix64) -> Matrix2 {
    Matrix2::diag(c64(rng.next_signed(), 0.0), c64(rng.next_signed(), 0.0))
}
