//! Shared fixtures for the criterion benchmarks.

use gossip_core::{star_sequence, CallSequence};

/// Star prefixes of every length for `n` dons.
pub fn star_prefixes(n: usize) -> Vec<CallSequence> {
    (0..=2 * n - 3).map(|m| star_sequence(n, m).expect("m is in range")).collect()
}

/// `count` seeded random pair sequences on `n` dons with `m` calls each.
pub fn random_sequences(n: usize, m: usize, count: u64) -> Vec<CallSequence> {
    (0..count).map(|j| gossip_core::gen::random_sequence(&mut gossip_core::gen::trial_rng(42, j), n, m)).collect()
}
