//! Seeded randomness with a bit-exact reproducibility contract.
//!
//! All engines draw through [`Chooser`], which only ever asks for a uniform
//! index below some bound. The same engine code can therefore be driven by a
//! real generator or by the exhaustive enumerator in `couplers::enumerate`.

use rand_core::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use crate::error::Result;

/// Golden-ratio increment used to spread replica indices.
pub const REPLICA_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replica `index` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ index.wrapping_mul(REPLICA_GAMMA))
}

/// Source of uniform choices. Errors only come from bounded enumeration.
pub trait Chooser {
    /// Uniform index in `0..n`; `n` must be positive.
    fn below(&mut self, n: usize) -> Result<usize>;
}

impl<C: Chooser + ?Sized> Chooser for &mut C {
    fn below(&mut self, n: usize) -> Result<usize> {
        (**self).below(n)
    }
}

/// PCG-XSL-RR 128/64 seeded through `seed_from_u64`.
#[derive(Clone, Debug)]
pub struct SimRng {
    inner: Pcg64,
}

impl SimRng {
    pub fn new(seed: u64) -> Self {
        SimRng {
            inner: Pcg64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform `0..n` by rejection below the largest multiple of `n`.
    pub fn uniform(&mut self, n: u64) -> u64 {
        assert!(n > 0, "uniform range must be non-empty");
        let rem = (u64::MAX % n + 1) % n;
        let zone = u64::MAX - rem;
        loop {
            let r = self.inner.next_u64();
            if r <= zone {
                return r % n;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.uniform(n as u64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.uniform(2) == 1
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }

    /// Uniform real in `[0, 1)` with 53 bits of precision.
    pub fn unit(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl Chooser for SimRng {
    fn below(&mut self, n: usize) -> Result<usize> {
        Ok(self.index(n))
    }
}
