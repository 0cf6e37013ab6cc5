//! Seed splitting.
//!
//! Every random decision in a run draws from its own ChaCha8 stream. The
//! key is the run's root seed and the 64-bit stream id is a SplitMix64 hash
//! of `(purpose, generation, index)`, so a component's randomness does not
//! depend on how many numbers any other component consumed, nor on the
//! order parallel work is scheduled in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Initialization = 1,
    Tournament = 2,
    Crossover = 3,
    OffspringSearch = 4,
    Replacement = 5,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn stream_id(purpose: Purpose, generation: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(purpose as u64) ^ generation) ^ index)
}

pub fn substream(seed: u64, purpose: Purpose, generation: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(purpose, generation, index));
    rng
}
