//! Counter-based random streams.
//!
//! Every trial of every estimator draws from its own ChaCha stream keyed by
//! `(master_seed, domain)` and selected by the trial index, so results do not
//! depend on how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stream handed to samplers.
pub type RandomStream = ChaCha8Rng;

/// Separates independent estimators that share one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamDomain {
    Mjd,
    Ia,
    RdmaActive,
    RdmaInactive,
    CiInterference,
    Spectrum,
    Custom(u64),
}

impl StreamDomain {
    fn tag(self) -> u64 {
        match self {
            StreamDomain::Mjd => 0x6d6a_6400,
            StreamDomain::Ia => 0x6961_0000,
            StreamDomain::RdmaActive => 0x7264_6131,
            StreamDomain::RdmaInactive => 0x7264_6132,
            StreamDomain::CiInterference => 0x6369_0000,
            StreamDomain::Spectrum => 0x7370_6563,
            StreamDomain::Custom(v) => v.rotate_left(17) ^ 0xc0ff_ee00_0000_0000,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Key for a family of per-trial streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey {
    seed: [u8; 32],
}

impl StreamKey {
    pub fn new(master_seed: u64, domain: StreamDomain) -> Self {
        let mut state = master_seed ^ domain.tag().wrapping_mul(0xa076_1d64_78bd_642f);
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        Self { seed }
    }

    /// Stream for trial `t`; identical for identical `(master_seed, domain, t)`.
    pub fn stream(&self, trial: u64) -> RandomStream {
        let mut rng = ChaCha8Rng::from_seed(self.seed);
        rng.set_stream(trial);
        rng
    }
}
