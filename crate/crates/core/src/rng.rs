//! Seeded pseudo-random stream.
//!
//! The generator is SplitMix64, written out so that any implementation in
//! any language reproduces the same stream bit for bit:
//!
//! ```text
//! state  = state + 0x9E3779B97F4A7C15            (mod 2^64)
//! z      = state
//! z      = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   (mod 2^64)
//! z      = (z ^ (z >> 27)) * 0x94D049BB133111EB   (mod 2^64)
//! output = z ^ (z >> 31)
//! ```
//!
//! Bounded integers use rejection: with `zone = 2^64 - (2^64 mod bound)`,
//! outputs `>= zone` are discarded and the result is `output mod bound`.
//! Unit floats are `(output >> 11) * 2^-53`.
//!
//! Per-instance seeds are `Seed(mix(seed ^ mix(index + 0x9E3779B97F4A7C15)))`
//! where `mix` is the three-line finalizer above applied to a single word.

use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    /// Child seed for the `index`-th item of a family rooted at `self`.
    pub fn derive(self, index: u64) -> Seed {
        Seed(mix(self.0 ^ mix(index.wrapping_add(GOLDEN))))
    }
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: Seed) -> Self {
        SplitMix64 { state: seed.0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in `0..bound`. Panics if `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % bound;
            }
        }
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.below(len as u64) as usize
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
