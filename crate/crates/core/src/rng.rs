//! Seeded random streams.
//!
//! Every random decision in the crate is drawn from a ChaCha stream keyed by
//! the user seed plus a stage label and an index, so a single stage (for
//! example the random edges of one node at one restart level) can be replayed
//! without running the stages before it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

const fn fnv1a(label: &str) -> u64 {
    let bytes = label.as_bytes();
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    let mut i = 0;
    while i < bytes.len() {
        hash ^= bytes[i] as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        i += 1;
    }
    hash
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Returns the stream for `(seed, label, index)`.
pub fn substream(seed: u64, label: &str, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(mix(fnv1a(label) ^ mix(index)));
    rng
}

/// Like [`substream`] but keyed by two indices.
pub fn substream2(seed: u64, label: &str, a: u64, b: u64) -> StreamRng {
    substream(seed, label, mix(a).wrapping_add(b.rotate_left(32)))
}
