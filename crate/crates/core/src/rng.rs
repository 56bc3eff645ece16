//! Deterministic random-number plumbing.
//!
//! Every stochastic component draws from a ChaCha substream derived from the
//! run seed plus a `(domain, iteration, member)` key. Substreams are
//! independent of each other and of evaluation order, which is what makes
//! parallel and sequential runs produce bit-identical results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Namespaces for derived streams so unrelated consumers never collide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamDomain {
    /// Initial population sampling.
    Init = 0,
    /// Per-iteration, per-candidate optimizer moves.
    Step = 1,
    /// Network weight initialization.
    WeightInit = 2,
    /// Fitness batch selection.
    Batch = 3,
    /// Dataset split shuffling.
    Shuffle = 4,
    /// Dropout mask sampling.
    Dropout = 5,
    /// Synthetic data generation.
    Synth = 6,
}

/// Root of all derived randomness for one run.
#[derive(Debug, Clone, Copy)]
pub struct RngContext {
    seed: u64,
}

const MEMBER_BITS: u32 = 20;
const ITERATION_BITS: u32 = 36;

impl RngContext {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Deterministic substream keyed by `(domain, iteration, member)`.
    ///
    /// Member indices must fit in 20 bits and iteration counters in 36; the
    /// packing keeps every key on a distinct ChaCha stream.
    pub fn stream(&self, domain: StreamDomain, iteration: u64, member: u64) -> ChaCha8Rng {
        debug_assert!(member < 1 << MEMBER_BITS, "member index out of stream range");
        debug_assert!(iteration < 1 << ITERATION_BITS, "iteration out of stream range");
        let id = ((domain as u64) << (MEMBER_BITS + ITERATION_BITS))
            | (iteration << MEMBER_BITS)
            | member;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(id);
        rng
    }
}
