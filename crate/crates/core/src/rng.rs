//! Seeded randomness.
//!
//! Every random stream in the crate is a [`ChaCha8Rng`] seeded from a `u64`.
//! Independent sub-streams (one per run, per projection, per outer
//! iteration...) are derived with [`derive_seed`], so results never depend
//! on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes `(seed, tag, index)` into a new seed with the splitmix64 finalizer.
pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    let mut z = seed
        ^ splitmix(tag.wrapping_add(0x9E37_79B9_7F4A_7C15))
        ^ splitmix(index.wrapping_mul(0xD1B5_4A32_D192_ED03).wrapping_add(1));
    z = splitmix(z);
    z
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) mod tags {
    pub const INIT_PARAMS: u64 = 1;
    pub const DECODE: u64 = 2;
    pub const QP2: u64 = 3;
    pub const GW_RESTART: u64 = 4;
    pub const GW_PROJECTION: u64 = 5;
    pub const GW_RUN: u64 = 6;
    pub const RUN: u64 = 7;
    pub const PHASE: u64 = 8;
    pub const SYNTH: u64 = 9;
}
