//! Deterministic random-stream derivation.
//!
//! Every consumer of randomness owns a ChaCha stream derived from the master
//! seed plus a tag path, e.g. `(replication, island)`. Streams depend only on
//! their tags, never on scheduling, so replications and islands can run on any
//! number of workers and still reproduce bit-identical results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer; the standard 64-bit mixer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent ChaCha8 stream from `master` and a tag path.
pub fn stream(master: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut state = mix(master ^ 0x6d70_6761_636f_7265); // "mpgacore"
    for &t in tags {
        state = mix(state ^ mix(t));
    }
    let mut seed = [0u8; 32];
    let mut word = state;
    for chunk in seed.chunks_exact_mut(8) {
        word = mix(word);
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}
