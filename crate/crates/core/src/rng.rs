//! Reproducible random streams.
//!
//! Every random quantity in the library is drawn from an [`RngStream`], a
//! `(master_seed, stream_index)` pair. The pair maps to a ChaCha8 generator
//! whose 256-bit key is expanded from the master seed with the SplitMix64
//! finaliser and whose 64-bit stream id is the index. ChaCha8 output is
//! specified bit-for-bit, so the same pair yields the same sequence on every
//! platform.
//!
//! Parallel drivers never share a generator. Replication `i` of a test uses
//! `stream.substream(i)`, and within a replication each role (pivot index,
//! tie-breaking, prior draw, ...) gets its own child stream. Results are
//! therefore independent of thread count and scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The concrete generator handed to models and kernels.
pub type StreamRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 output: add the golden-ratio increment, then finalise.
/// A bijection on `u64` with full avalanche and no fixed point at zero.
#[inline]
pub fn mix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Identifies one independent random sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

/// Stream `index` under `master`. The mapping to generator state is injective:
/// the first key word is `mix64(master)` and the ChaCha stream id is `index`.
pub fn derive_substream(master: u64, index: u64) -> RngStream {
    RngStream {
        master_seed: master,
        stream_index: index,
    }
}

impl RngStream {
    pub fn new(master_seed: u64) -> Self {
        derive_substream(master_seed, 0)
    }

    /// Child stream `index` of this stream. The child's master seed is a mix
    /// of both parent coordinates, so children of distinct parents do not
    /// overlap except with negligible probability.
    pub fn substream(&self, index: u64) -> RngStream {
        let parent = mix64(self.master_seed.rotate_left(23) ^ mix64(self.stream_index ^ 0x5851_F42D_4C95_7F2D));
        derive_substream(parent, index)
    }

    pub fn rng(&self) -> StreamRng {
        let mut seed = [0u8; 32];
        for (i, chunk) in seed.chunks_exact_mut(8).enumerate() {
            let word = mix64(self.master_seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(i as u64)));
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Role-specific child streams inside one replication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Role {
    Pivot = 0,
    TieBreak = 1,
    Prior = 2,
    Data = 3,
    Chain = 4,
}

impl RngStream {
    pub fn role(&self, role: Role) -> StreamRng {
        self.substream(role as u64).rng()
    }
}
