//! Seed derivation.
//!
//! Every stream used by the crate is seeded by `derive(master, domain, index)`,
//! a SplitMix64 mix of the three words. Domains separate the independent
//! consumers (tapes, walks, initial configurations, ...), and `index` is the
//! trial (or walk, or site) counter. Parallel drivers compute the seed of
//! trial `i` from `i` alone, so results never depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DOMAIN_TAPE: u64 = 0x7461_7065;
pub const DOMAIN_WALK: u64 = 0x7761_6c6b;
pub const DOMAIN_LHAT: u64 = 0x6c68_6174;
pub const DOMAIN_INIT: u64 = 0x696e_6974;
pub const DOMAIN_SELECT: u64 = 0x7365_6c65;
pub const DOMAIN_POLICY: u64 = 0x706f_6c69;
pub const DOMAIN_TRIAL: u64 = 0x7472_6961;
pub const DOMAIN_INSTANCE: u64 = 0x696e_7374;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `(master, domain, index)` into a 64-bit seed.
pub fn derive(master: u64, domain: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ domain) ^ index)
}

/// A ChaCha8 generator for `(seed, stream)`. Streams of one seed are
/// independent; this is how per-site tapes and per-walk step sequences are
/// addressed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
