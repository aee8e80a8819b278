//! Deterministic randomness plumbing.
//!
//! All stochastic code draws from ChaCha8 so that a fixed seed reproduces
//! bit-identical results on every platform. Independent sub-computations
//! (Monte Carlo repetitions, selection vs. evaluation) get their own streams
//! of the same generator rather than sharing one sequence, which lets
//! repetitions run on any number of workers while matching the single-thread
//! draw order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for the given seed (stream 0).
pub fn master_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `stream` of the seed's generator. Streams never overlap.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derive an independent sub-seed, e.g. to keep the evaluation RNG decoupled
/// from the selection RNG.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
