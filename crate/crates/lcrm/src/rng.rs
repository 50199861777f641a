//! Deterministic, stream-splittable random number generation.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

/// A named position in ChaCha12's (seed, stream) space. Identical values
/// reproduce identical draw sequences on every platform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> RngStream {
        RngStream { seed, stream_id }
    }

    /// Instantiates the generator at this stream position.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut r = ChaCha12Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream_id);
        r
    }

    /// A derived stream for a sub-task (replicate, chain, fixture, ...).
    pub fn substream(&self, salt: u64) -> RngStream {
        RngStream { seed: self.seed, stream_id: splitmix64(self.stream_id ^ splitmix64(salt)) }
    }
}

/// SplitMix64 finalizer; used only to spread substream salts.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}
