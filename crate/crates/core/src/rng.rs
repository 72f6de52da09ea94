//! Reproducible random streams.
//!
//! Every replicate `r` of an experiment draws from its own ChaCha8 stream,
//! seeded by [`child_seed`]`(master, r)`. The mixing function is two rounds
//! of the SplitMix64 finalizer:
//!
//! ```text
//! child_seed(m, r) = mix(mix(m) ^ (r + 0x9E3779B97F4A7C15))
//! mix(z) = z' ^ (z' >> 31)  where
//!          z1 = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!          z' = (z1 ^ (z1 >> 27)) * 0x94D049BB133111EB
//! ```
//!
//! Streams share no state, so replicates can run in any order or in
//! parallel without changing results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `index` under `master`.
pub fn child_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index.wrapping_add(GOLDEN_GAMMA))
}

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream of replicate `index` under `master`.
pub fn child_stream(master: u64, index: u64) -> Stream {
    stream(child_seed(master, index))
}
