//! Deterministic seeding.
//!
//! All randomness flows from `ChaCha8Rng` seeded through `seed_from_u64`.
//! Independent streams for sub-tasks are derived with the SplitMix64
//! finalizer, so a task's stream depends only on `(master seed, index)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type EngineRng = ChaCha8Rng;

/// Stream used for sampling the presentation matrix.
pub const STREAM_PHI: u64 = 0;
/// Stream used for local-freeness evaluation points.
pub const STREAM_POINTS: u64 = 1;

pub fn rng_from_seed(seed: u64) -> EngineRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 of `master + (index + 1) * golden ratio`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
