use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Public coins: a seed both parties expand into the same ChaCha8 stream.
/// Reading it is free; nothing here touches the ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharedRandomness {
    seed: u64,
}

impl SharedRandomness {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A fresh cursor at position zero. Each party owns one.
    pub fn stream(&self) -> SharedStream {
        SharedStream {
            rng: ChaCha8Rng::seed_from_u64(self.seed),
        }
    }
}

/// Counter-based reader over the shared stream.
#[derive(Debug, Clone)]
pub struct SharedStream {
    rng: ChaCha8Rng,
}

impl SharedStream {
    /// Position in 32-bit words from the start of the stream.
    pub fn position(&self) -> u128 {
        self.rng.get_word_pos()
    }

    pub fn seek(&mut self, word_pos: u128) {
        self.rng.set_word_pos(word_pos);
    }
}

impl RngCore for SharedStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
