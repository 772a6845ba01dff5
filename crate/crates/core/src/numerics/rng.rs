//! Counter-based random streams.
//!
//! A stream is keyed by `(master_seed, domain, child)` and positioned on the
//! ChaCha8 stream number `replicate_index`, so every replicate owns an
//! independent, reproducible sequence no matter which worker thread draws it.
//! Domains separate experiments that share a master seed (for example the
//! points of a parameter grid); [`RngStream::child`] derives extra sequences
//! for rare resampling events without disturbing the primary one.
//!
//! Normal deviates use the Ziggurat method from `rand_distr`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    replicate_index: u64,
    domain: u64,
    child: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, replicate_index: u64) -> Self {
        Self::keyed(master_seed, 0, 0, replicate_index)
    }

    /// Stream for `replicate_index` within a numbered domain.
    pub fn for_domain(master_seed: u64, domain: u64, replicate_index: u64) -> Self {
        Self::keyed(master_seed, domain, 0, replicate_index)
    }

    fn keyed(master_seed: u64, domain: u64, child: u64, replicate_index: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&domain.to_le_bytes());
        key[16..24].copy_from_slice(&child.to_le_bytes());
        key[24..].copy_from_slice(b"haargaus");
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(replicate_index);
        Self {
            master_seed,
            replicate_index,
            domain,
            child,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn replicate_index(&self) -> u64 {
        self.replicate_index
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    /// The `k`-th derived stream of this replicate (`k ≥ 1`; 0 is the
    /// primary sequence).
    pub fn child(&self, k: u64) -> Self {
        debug_assert!(k != 0);
        Self::keyed(self.master_seed, self.domain, self.child.wrapping_add(k), self.replicate_index)
    }

    /// One standard normal deviate.
    #[inline]
    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn fill_gaussian(&mut self, out: &mut [f64]) {
        for x in out.iter_mut() {
            *x = self.rng.sample(StandardNormal);
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub(crate) fn inner(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Convenience free function mirroring [`RngStream::gaussian`].
pub fn gaussian(stream: &mut RngStream) -> f64 {
    stream.gaussian()
}
