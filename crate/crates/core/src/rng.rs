//! Seeded random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream whose
//! 64-bit seed is derived from a root seed and a path of indices (grid point,
//! trial, ...). Derivation folds each path element into the state with the
//! SplitMix64 finalizer:
//!
//! ```text
//! h0 = mix(seed)
//! h_{j+1} = mix(h_j ^ mix(path[j] + 0x9E3779B97F4A7C15 * (j + 1)))
//! ```
//!
//! Streams are therefore independent of the order in which trials execute.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for all simulations.
pub type StreamRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of the stream at `path` below `seed`.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    let mut h = mix(seed);
    for (j, &p) in path.iter().enumerate() {
        let salt = GOLDEN.wrapping_mul(j as u64 + 1);
        h = mix(h ^ mix(p.wrapping_add(salt)));
    }
    h
}

/// Returns the generator for `path` below `seed`.
pub fn stream(seed: u64, path: &[u64]) -> StreamRng {
    StreamRng::seed_from_u64(derive_seed(seed, path))
}
