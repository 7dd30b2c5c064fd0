use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Name of the underlying generator, recorded in experiment metadata.
pub const GENERATOR_ID: &str = "chacha12 (rand_chacha 0.9, seed_from_u64)";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function. A bijection on `u64`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of child stream `index` under `master`:
/// `splitmix64(master ^ splitmix64(index))`.
///
/// Both mixing steps are bijections, so distinct indices always give
/// distinct child seeds for the same master seed. The scheme is part of the
/// output format and must not change.
pub fn child_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// A seeded, deterministic random source.
///
/// Every stochastic operation in the crate draws from one of these. Streams
/// own their state, so independent streams can be moved to other threads.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// Stream for trial / walker `index` derived from `master`.
    pub fn child(master: u64, index: u64) -> Self {
        Self::new(child_seed(master, index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
