//! Deterministic RNG plumbing.
//!
//! Every randomized operation takes an explicit RNG. Session and trial RNGs
//! are derived from a single `u64` seed plus a stream index, so fanning
//! trials out across threads never changes results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// The RNG used throughout the crate.
pub type SessionRng = ChaCha12Rng;

/// Root RNG for a given seed.
pub fn seeded(seed: u64) -> SessionRng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Independent RNG for (seed, stream). Streams with distinct indices never
/// overlap, so per-trial generators can be handed to worker threads.
pub fn derived(seed: u64, stream: u64) -> SessionRng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
