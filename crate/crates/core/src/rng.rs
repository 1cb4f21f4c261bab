//! Deterministic seed derivation.
//!
//! Every random quantity in an instance is drawn from a generator seeded by
//! hashing `(base seed, role tag, indices...)`, so any single read can be
//! regenerated in isolation and whole runs are reproducible bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Role tags keeping the derived streams disjoint.
pub const TAG_READ: u64 = 0x52454144; // "READ"
pub const TAG_PAYLOAD: u64 = 0x50415944; // "PAYD"
pub const TAG_SHUFFLE: u64 = 0x53485546; // "SHUF"
pub const TAG_TRIAL: u64 = 0x5452494C; // "TRIL"

/// Hashes a sequence of words into a single seed (splitmix64 absorption).
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut h: u64 = 0x243F_6A88_85A3_08D3;
    for &p in parts {
        h ^= p;
        h = h.wrapping_add(0x9E37_79B9_7F4A_7C15);
        h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h ^= h >> 31;
    }
    h
}

/// A counter-style generator for the given derivation path.
pub fn derive_rng(parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(parts))
}
