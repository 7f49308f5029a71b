//! Portable, seedable random streams.
//!
//! Every stochastic routine draws from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`. The generator output is specified
//! independently of platform and word size, so a given `(seed, stream)`
//! reproduces the same draws everywhere. Independent chains use distinct
//! stream numbers of the same seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ChainRng = ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
