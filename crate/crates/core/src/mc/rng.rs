//! Per-slot random streams.
//!
//! Every (slot, link) pair gets its own ChaCha8 stream under the run seed,
//! so a slot's draws do not depend on which worker simulates it or in what
//! order.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Which channel a stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum LinkTag {
    SourceRis = 0,
    RisDestination = 1,
    RisEavesdropper = 2,
    /// Second, independent S-R draw for the eavesdropper path.
    SourceRisEve = 3,
}

/// Random stream for one link of one slot.
pub struct SlotStream {
    rng: ChaCha8Rng,
}

impl SlotStream {
    pub fn new(seed: u64, slot: u64, link: LinkTag) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((slot << 2) | link as u64);
        Self { rng }
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Box-Muller draw of a zero-mean circularly-symmetric complex Gaussian
    /// with `E|h|^2 = 1`, returned as `(|h|, arg h)`.
    pub fn complex_gaussian_polar(&mut self) -> (f64, f64) {
        let r = (-self.uniform().ln()).sqrt();
        (r, std::f64::consts::TAU * self.uniform())
    }
}
