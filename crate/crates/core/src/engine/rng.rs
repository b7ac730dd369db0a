//! Seeded random streams.
//!
//! Each stochastic component draws from its own ChaCha8 stream selected by
//! `(seed, stream id)`, so enabling randomness in one component never shifts
//! the draws seen by another.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Stream identifiers. Values are part of the reproducibility contract: do not renumber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    Channel = 1,
    Beam = 2,
    Phy = 3,
    Stack = 4,
}

#[derive(Debug, Clone)]
pub struct SimRng {
    inner: ChaCha8Rng,
}

impl SimRng {
    pub fn new(seed: u64, stream: Stream) -> Self {
        Self::with_stream_id(seed, stream as u64)
    }

    pub fn with_stream_id(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        inner.set_word_pos(0);
        SimRng { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Zero-mean Gaussian sample. `std_dev == 0` consumes no randomness.
    pub fn gaussian(&mut self, std_dev: f64) -> f64 {
        if std_dev == 0.0 {
            return 0.0;
        }
        let n = Normal::new(0.0, std_dev).expect("standard deviation must be finite and >= 0");
        n.sample(&mut self.inner)
    }
}
