//! The one PRNG used for every sampled workload.
//!
//! xoshiro256++ seeded from a `u64` through SplitMix64, so a given `--seed`
//! yields the same sample sequence in any implementation that follows the
//! reference generator.

use rand::SeedableRng;
pub use rand_xoshiro::Xoshiro256PlusPlus as Prng;

pub const DEFAULT_SEED: u64 = 42;

pub fn seeded(seed: u64) -> Prng {
    Prng::seed_from_u64(seed)
}
