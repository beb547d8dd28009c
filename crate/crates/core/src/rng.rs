//! Seed derivation so every pipeline stage owns an independent, reproducible stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer over `seed` and a stage tag.
pub fn derive_seed(seed: u64, stage: u64) -> u64 {
    let mut z = seed ^ stage.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stage_rng(seed: u64, stage: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, stage))
}

/// Stage tags. Distinct constants keep streams for different stages disjoint.
pub(crate) mod stage {
    pub const SPLIT: u64 = 1;
    pub const NEG_TRAIN: u64 = 2;
    pub const NEG_VAL: u64 = 3;
    pub const NEG_TEST: u64 = 4;
    pub const WALKS: u64 = 10;
    pub const SKIPGRAM: u64 = 11;
    pub const MLP_INIT: u64 = 20;
    pub const MLP_SHUFFLE: u64 = 21;
}
