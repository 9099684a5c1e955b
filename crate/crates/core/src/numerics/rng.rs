use std::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Reproducible uniform/Gaussian source addressed by `(seed, stream_id)`.
///
/// Backed by ChaCha8, whose 64-bit stream selector gives every `stream_id`
/// its own keystream under the same key. Monte Carlo workers each take a
/// distinct `stream_id`, so results do not depend on scheduling.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

pub fn seeded_stream(seed: u64, stream_id: u64) -> RngStream {
    RngStream::new(seed, stream_id)
}

/// Mixes a domain tag into a seed so that different consumers (data bits,
/// noise, pilots) of the same user seed draw from unrelated keys.
pub fn derive_seed(seed: u64, domain: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ domain.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&derive_seed(seed, 1).to_le_bytes());
        key[16..24].copy_from_slice(&derive_seed(seed, 2).to_le_bytes());
        key[24..].copy_from_slice(&derive_seed(seed, 3).to_le_bytes());
        let mut inner = ChaCha8Rng::from_seed(key);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound` via a widening multiply. The bias is
    /// below `bound / 2^64`, far under anything the simulator can resolve.
    #[inline]
    pub fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    /// Two independent standard normal variates (Box-Muller).
    ///
    /// Always consumes exactly two uniforms, so streams stay aligned no
    /// matter which values were drawn.
    #[inline]
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        // 1 - u lies in (0, 1], keeping the logarithm finite
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        (radius * c, radius * s)
    }

    /// Fills `out` with independent fair bits stored as 0/1 bytes.
    pub fn fill_bits(&mut self, out: &mut [u8]) {
        for chunk in out.chunks_mut(64) {
            let mut word = self.next_u64();
            for bit in chunk {
                *bit = (word & 1) as u8;
                word >>= 1;
            }
        }
    }
}
