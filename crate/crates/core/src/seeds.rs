//! Per-repetition seed derivation.
//!
//! Repetition `rep` of a batch with base seed `base` uses the SplitMix64
//! sequence started at `base`: its stream `s` (0 = losses, 1 = graphs,
//! 2 = policy) gets output number `3·rep + s` (0-indexed). Streams are
//! independent, so swapping the policy never perturbs an oblivious environment.

use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The `n`-th output (0-indexed) of SplitMix64 seeded with `state`.
pub fn splitmix64(state: u64, n: u64) -> u64 {
    let mut z = state.wrapping_add(GOLDEN_GAMMA.wrapping_mul(n.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeSeeds {
    pub repetition: u64,
    pub loss: u64,
    pub graph: u64,
    pub policy: u64,
}

impl EpisodeSeeds {
    pub fn derive(base: u64, repetition: u64) -> Self {
        let n = 3 * repetition;
        Self {
            repetition,
            loss: splitmix64(base, n),
            graph: splitmix64(base, n + 1),
            policy: splitmix64(base, n + 2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // first outputs of the reference SplitMix64 generator seeded with 0
        assert_eq!(splitmix64(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(0, 1), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn streams_are_distinct_and_stable() {
        let a = EpisodeSeeds::derive(7, 0);
        let b = EpisodeSeeds::derive(7, 1);
        assert_ne!(a.loss, a.graph);
        assert_ne!(a.policy, b.policy);
        assert_eq!(a, EpisodeSeeds::derive(7, 0));
        assert_eq!(b.loss, splitmix64(7, 3));
    }
}
