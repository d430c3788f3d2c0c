//! Seeding utilities.
//!
//! Every randomized stage (edge masking, Louvain sweeps, sparsification,
//! weight init, reparameterization noise, dropout, subgraph sampling) draws
//! from its own ChaCha stream derived from one master seed, so adding or
//! removing a stage never shifts the randomness of the others.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derives a per-purpose seed from a master seed and a label.
pub fn derive_seed(master: u64, purpose: &str) -> u64 {
    // FNV-1a over the label, then splitmix64 to decorrelate.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in purpose.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    splitmix64(master ^ h)
}

/// Deterministic, platform-independent RNG for the given seed.
pub fn new_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}
