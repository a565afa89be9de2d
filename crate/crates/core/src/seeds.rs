//! Deterministic seed derivation.
//!
//! Every random stream is seeded with `derive(parent, stream)`, a SplitMix64
//! mix of the parent seed and a stream counter. Per-trial seeds in sweeps use
//! `trial_seed(master, point, trial) = derive(master, (point << 32) | trial)`,
//! so any record can be reproduced without running the others.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

pub fn derive(parent: u64, stream: u64) -> u64 {
    splitmix64(parent ^ splitmix64(stream))
}

pub fn trial_seed(master: u64, point: usize, trial: usize) -> u64 {
    derive(master, ((point as u64) << 32) | trial as u64)
}
