//! Seed partitioning for reproducible parallel simulation.
//!
//! Every replicate owns an independent ChaCha20 stream: the 256-bit key is
//! the little-endian user seed, the little-endian lane number and a 16-byte
//! domain tag; the 64-bit stream id is the replicate index. A replicate's
//! draws therefore depend only on `(seed, lane, replicate)`, never on which
//! thread evaluates it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Domain tags keep sweep and PIT streams disjoint under a shared seed.
pub(crate) const SWEEP_DOMAIN: [u8; 16] = *b"cdsweep\0\0\0\0\0\0\0\0\0";
pub(crate) const PIT_DOMAIN: [u8; 16] = *b"cdpit\0\0\0\0\0\0\0\0\0\0\0";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplicateStreams {
    seed: u64,
    domain: [u8; 16],
}

impl ReplicateStreams {
    pub(crate) fn new(seed: u64, domain: [u8; 16]) -> Self {
        ReplicateStreams { seed, domain }
    }

    /// Generator for replicate `replicate` in lane `lane`.
    pub fn stream(&self, lane: u64, replicate: u64) -> ChaCha20Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&lane.to_le_bytes());
        key[16..].copy_from_slice(&self.domain);
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(replicate);
        rng
    }
}
