//! Seeded random streams.
//!
//! Every stochastic operation draws from a stream derived from
//! (seed, operation label), so reruns with the same seed are bit-identical
//! no matter which other operations ran in between.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a, used only to fold a label into the seed. Stable across platforms.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Derive an independent generator for `label` from the run seed.
pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    let lh = fnv1a(label.as_bytes());
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&lh.to_le_bytes());
    key[16..24].copy_from_slice(&(seed ^ lh.rotate_left(17)).to_le_bytes());
    key[24..32].copy_from_slice(&lh.wrapping_mul(0x9e3779b97f4a7c15).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
