//! Deterministic random streams for Monte Carlo runs.
//!
//! Each realization gets its own ChaCha8 stream (a counter-based generator)
//! whose 64-bit seed is a SplitMix64 mix of `(master_seed, grid index,
//! realization index)`. A stream depends only on those indices, so results do
//! not change with thread count or scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the stream at `(grid_index, realization)` under `master_seed`.
pub fn stream_seed(master_seed: u64, grid_index: u64, realization: u64) -> u64 {
    let a = splitmix64(master_seed);
    let b = splitmix64(a ^ grid_index.wrapping_mul(0xD6E8_FEB8_6659_FD93));
    splitmix64(b ^ realization.wrapping_mul(0xA076_1D64_78BD_642F))
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
