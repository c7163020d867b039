//! Seeded generators for test inputs.
//!
//! Every generator takes the RNG explicitly; callers derive one stream per
//! trial from a single seed so that results do not depend on scheduling.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::model::{Call, CallSequence};

/// RNG for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_pair<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    let u = rng.gen_range(1..=n);
    let mut v = rng.gen_range(1..n);
    if v >= u {
        v += 1;
    }
    (u, v)
}

/// `m` calls, each a uniformly random pair of distinct dons.
pub fn random_sequence<R: Rng>(rng: &mut R, n: usize, m: usize) -> CallSequence {
    let pairs: Vec<(usize, usize)> = (0..m).map(|_| random_pair(rng, n)).collect();
    CallSequence::from_pairs(n, &pairs).expect("generated pairs are valid")
}

/// `m` calls of `k` distinct dons each.
pub fn random_k_sequence<R: Rng>(rng: &mut R, n: usize, k: usize, m: usize) -> CallSequence {
    let dons: Vec<usize> = (1..=n).collect();
    let calls = (0..m)
        .map(|_| {
            let members: Vec<usize> = dons.choose_multiple(rng, k).copied().collect();
            Call::new(&members).expect("distinct members")
        })
        .collect();
    CallSequence::new(n, calls).expect("generated calls are valid")
}

/// `n` uniform in `2..=n_max`, `m` uniform in `0..=2n`.
pub fn random_case<R: Rng>(rng: &mut R, n_max: usize) -> CallSequence {
    let n = rng.gen_range(2..=n_max.max(2));
    let m = rng.gen_range(0..=2 * n);
    random_sequence(rng, n, m)
}

/// A sequence on `dons` dons where the last don hears her own gossip: she
/// calls someone, the news travels along a path, and its last holder calls
/// her back. Random calls are mixed in to reach a length of at most `m_max`.
pub fn planted_cycle<R: Rng>(rng: &mut R, dons: usize, m_max: usize) -> CallSequence {
    assert!(dons >= 3 && m_max >= 2);
    let x = dons;
    let others: Vec<usize> = (1..x).collect();

    let hops = rng.gen_range(0..=(m_max - 2).min(others.len()));
    let mut walk = vec![*others.choose(rng).expect("non-empty")];
    for _ in 0..hops {
        let cur = *walk.last().expect("non-empty");
        let next = loop {
            let w = *others.choose(rng).expect("non-empty");
            if w != cur {
                break w;
            }
        };
        walk.push(next);
    }
    let mut planted = vec![(x, walk[0])];
    planted.extend(walk.windows(2).map(|w| (w[0], w[1])));
    planted.push((*walk.last().expect("non-empty"), x));

    let extra = rng.gen_range(0..=m_max - planted.len());
    let mut pairs = planted;
    for _ in 0..extra {
        let at = rng.gen_range(0..=pairs.len());
        pairs.insert(at, random_pair(rng, dons));
    }
    CallSequence::from_pairs(dons, &pairs).expect("generated pairs are valid")
}

/// A sequence of `2n - 5` calls for odd `n`: `(n-1)/2` mutual first calls,
/// then `n - 4` other calls, then `(n-1)/2` mutual final calls. One don
/// skips the opening round and one skips the closing round; both take part
/// in the middle calls. With `cover_all`, the middle calls must touch every
/// don, which needs `n >= 9`; returns `None` if that cannot be arranged.
pub fn mutual_profile<R: Rng>(rng: &mut R, n: usize, cover_all: bool) -> Option<CallSequence> {
    if n < 5 || n.is_multiple_of(2) {
        return None;
    }
    let misc_len = n - 4;
    if cover_all && 2 * misc_len < n {
        return None;
    }
    let mut dons: Vec<usize> = (1..=n).collect();

    dons.shuffle(rng);
    let late_starter = dons[0];
    let openers: Vec<(usize, usize)> = dons[1..].chunks(2).map(|c| (c[0], c[1])).collect();

    dons.shuffle(rng);
    let early_finisher = dons[0];
    let closers: Vec<(usize, usize)> = dons[1..].chunks(2).map(|c| (c[0], c[1])).collect();

    let middle = (0..10_000).find_map(|_| {
        let calls: Vec<(usize, usize)> = (0..misc_len).map(|_| random_pair(rng, n)).collect();
        let touched: Vec<bool> = (1..=n).map(|d| calls.iter().any(|&(u, v)| u == d || v == d)).collect();
        let ok = touched[late_starter - 1]
            && touched[early_finisher - 1]
            && (!cover_all || touched.iter().all(|&t| t));
        ok.then_some(calls)
    })?;

    let mut pairs = openers;
    pairs.extend(middle);
    pairs.extend(closers);
    Some(CallSequence::from_pairs(n, &pairs).expect("generated pairs are valid"))
}
