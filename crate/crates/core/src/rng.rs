//! Reproducible uniform streams.
//!
//! Each `(seed, stream_id)` pair selects an independent ChaCha8 keystream: the
//! seed fixes the key and the stream id the 64-bit nonce, so replicates can be
//! generated in any order or concurrently without coordination.

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeededStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        SeededStream { seed, stream_id }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Infinite iterator of uniforms strictly inside `(0, 1)`.
    pub fn uniforms(&self) -> impl Iterator<Item = f64> {
        let mut rng = self.rng();
        std::iter::repeat_with(move || open_unit(&mut rng))
    }
}

/// Maps 53 random bits to the midpoint grid of `(0, 1)`, which never hits 0 or 1.
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// SplitMix64 finalizer, used to derive stream ids from structured keys.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream id for replicate `i` of the cell with sample size `n`.
pub fn replicate_stream_id(n: usize, i: usize) -> u64 {
    mix64(mix64(n as u64).wrapping_add(i as u64))
}
