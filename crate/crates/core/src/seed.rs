//! Seed derivation for reproducible ensembles.
//!
//! Every sample gets its own 64-bit seed derived from the experiment's base
//! seed and the sample id:
//!
//! ```text
//! seed_id = mix64(base_seed ^ id.wrapping_mul(0x9E3779B97F4A7C15))
//! ```
//!
//! `mix64` is the SplitMix64 output finalizer (Stafford variant 13):
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z =  z ^ (z >> 31)
//! ```
//!
//! The finalizer is a bijection on `u64` and multiplication by an odd constant
//! is a bijection too, so the derived seed is injective in `id` for a fixed
//! base seed.
//!
//! Each consumer of randomness draws from its own ChaCha8 stream keyed by the
//! sample seed: stream 0 grows the graph, stream 1 samples like rates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub(crate) const GRAPH_STREAM: u64 = 0;
pub(crate) const RATE_STREAM: u64 = 1;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-sample seed for sample `id` of an experiment seeded with `base_seed`.
#[inline]
pub fn split(base_seed: u64, id: u64) -> u64 {
    mix64(base_seed ^ id.wrapping_mul(GOLDEN_GAMMA))
}

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
