use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::error::{GossipError, Result};
use crate::model::{CallSequence, DonId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TailOutcome {
    /// Some don takes no part in the first `n - 2` calls.
    IsolatedDon { don: usize },
    /// Each of the `n - 3` calls after position `n - 2` meets an earlier
    /// call from position `n - 2` on.
    TailConnected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailNormalization {
    pub sequence: CallSequence,
    pub outcome: TailOutcome,
    /// Adjacent transpositions needed to reach `sequence` from the input.
    pub swaps: usize,
    /// `order[p]` is the 0-based input position of the call now at `p`.
    #[serde(skip)]
    pub order: Vec<usize>,
}

/// For `1 <= i <= n - 3`, call `n - 2 + i` shares a don with one of the
/// calls `n - 2, ..., n - 3 + i` (1-based). Positions past the end are
/// ignored.
pub fn is_tail_connected(seq: &CallSequence) -> bool {
    let n = seq.n();
    if n < 4 {
        return true;
    }
    let calls = seq.calls();
    let anchor = n - 2;
    if calls.len() < anchor {
        return false;
    }
    let mut seen = calls[anchor - 1].mask();
    for p in (anchor + 1)..=(2 * n - 5).min(calls.len()) {
        let mask = calls[p - 1].mask();
        if mask & seen == 0 {
            return false;
        }
        seen |= mask;
    }
    true
}

fn isolated_in_prefix(seq: &CallSequence) -> Option<DonId> {
    let n = seq.n();
    let touched = seq.calls()[..n.saturating_sub(2)].iter().fold(0u64, |acc, c| acc | c.mask());
    seq.dons().find(|d| touched & d.bit() == 0)
}

/// Reorders `seq` by swapping adjacent disjoint calls only, so that either
/// the tail after position `n - 2` is connected or some don sits out the
/// first `n - 2` calls. Calls keep their individual knowledge gains.
pub fn normalize_tail(seq: &CallSequence) -> Result<TailNormalization> {
    let n = seq.n();
    let m = seq.len();
    if m + 2 < n {
        return Err(GossipError::Precondition(format!("need at least n - 2 = {} calls, got {m}", n - 2)));
    }
    let identity: Vec<usize> = (0..m).collect();
    if is_tail_connected(seq) {
        return Ok(build(seq, identity, TailOutcome::TailConnected));
    }
    if let Some(d) = isolated_in_prefix(seq) {
        return Ok(build(seq, identity, TailOutcome::IsolatedDon { don: d.number() }));
    }
    if let Some(order) = connect_tail(seq) {
        return Ok(build(seq, order, TailOutcome::TailConnected));
    }
    if let Some((order, d)) = isolate_don(seq) {
        return Ok(build(seq, order, TailOutcome::IsolatedDon { don: d.number() }));
    }
    Err(GossipError::Construction(format!(
        "no reordering of {seq} by disjoint swaps connects the tail or leaves a don out of the first {} calls",
        n - 2
    )))
}

fn build(seq: &CallSequence, order: Vec<usize>, outcome: TailOutcome) -> TailNormalization {
    let calls = order.iter().map(|&j| seq.calls()[j].clone()).collect();
    let sequence = CallSequence::new(seq.n(), calls).expect("a reordering of a valid sequence is valid");
    let swaps = inversions(&order);
    TailNormalization { sequence, outcome, swaps, order }
}

fn inversions(order: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] {
                count += 1;
            }
        }
    }
    count
}

/// `deps[j]`: earlier calls that share a don with call `j`. Exactly the
/// orders that respect these are reachable by swapping disjoint neighbours.
fn dependencies(seq: &CallSequence) -> Vec<u64> {
    let calls = seq.calls();
    (0..calls.len())
        .map(|j| (0..j).filter(|&i| !calls[i].is_disjoint(&calls[j])).fold(0u64, |acc, i| acc | 1 << i))
        .collect()
}

fn connect_tail(seq: &CallSequence) -> Option<Vec<usize>> {
    let m = seq.len();
    if m > 64 {
        return None;
    }
    let n = seq.n();
    let anchor = n - 2;
    let last_constrained = (2 * n - 5).min(m);
    let deps = dependencies(seq);
    let mut failed = FxHashSet::default();
    let mut order = Vec::with_capacity(m);

    #[allow(clippy::too_many_arguments)]
    fn go(
        seq: &CallSequence,
        deps: &[u64],
        anchor: usize,
        last: usize,
        placed: u64,
        seen: u64,
        order: &mut Vec<usize>,
        failed: &mut FxHashSet<(u64, u64)>,
    ) -> bool {
        let pos = order.len() + 1;
        if pos > last {
            return true;
        }
        if failed.contains(&(placed, seen)) {
            return false;
        }
        for j in 0..seq.len() {
            if placed >> j & 1 != 0 || deps[j] & !placed != 0 {
                continue;
            }
            let mask = seq.calls()[j].mask();
            let next_seen = if pos < anchor {
                0
            } else if pos == anchor {
                mask
            } else if mask & seen != 0 {
                seen | mask
            } else {
                continue;
            };
            order.push(j);
            if go(seq, deps, anchor, last, placed | 1 << j, next_seen, order, failed) {
                return true;
            }
            order.pop();
        }
        failed.insert((placed, seen));
        false
    }

    if !go(seq, &deps, anchor, last_constrained, 0, 0, &mut order, &mut failed) {
        return None;
    }
    let placed: FxHashSet<usize> = order.iter().copied().collect();
    order.extend((0..m).filter(|j| !placed.contains(j)));
    Some(order)
}

/// Moves forward the calls whose whole causal past avoids some don.
fn isolate_don(seq: &CallSequence) -> Option<(Vec<usize>, DonId)> {
    let n = seq.n();
    let m = seq.len();
    let calls = seq.calls();
    for d in seq.dons() {
        // calls whose causal past never involves d
        let mut tainted = d.bit();
        let clean: Vec<usize> = calls
            .iter()
            .enumerate()
            .filter_map(|(j, c)| {
                if c.mask() & tainted != 0 {
                    tainted |= c.mask();
                    None
                } else {
                    Some(j)
                }
            })
            .collect();
        if clean.len() >= n - 2 {
            let mut order: Vec<usize> = clean[..n - 2].to_vec();
            let chosen: FxHashSet<usize> = order.iter().copied().collect();
            order.extend((0..m).filter(|j| !chosen.contains(j)));
            return Some((order, d));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::star_sequence;
    use crate::model::{call_gains, final_state};

    #[test]
    fn star_tail_already_connected() {
        let seq = star_sequence(5, 5).unwrap();
        let r = normalize_tail(&seq).unwrap();
        assert_eq!(r.outcome, TailOutcome::TailConnected);
        assert_eq!(r.swaps, 0);
        assert_eq!(r.sequence, seq);
    }

    #[test]
    fn late_don_is_isolated() {
        let seq = CallSequence::from_pairs(5, &[(1, 2), (3, 4), (1, 3), (2, 4), (5, 1)]).unwrap();
        let r = normalize_tail(&seq).unwrap();
        assert_eq!(r.outcome, TailOutcome::IsolatedDon { don: 5 });
        assert_eq!(r.swaps, 0);
    }

    #[test]
    fn four_dons_connected() {
        let seq = CallSequence::from_pairs(4, &[(1, 2), (3, 4), (1, 3)]).unwrap();
        assert_eq!(normalize_tail(&seq).unwrap().outcome, TailOutcome::TailConnected);
    }

    #[test]
    fn swaps_connect_tail() {
        // (1,3) misses (4,5) at position 3; moving (1,2) later fixes that
        let seq = CallSequence::from_pairs(5, &[(1, 2), (3, 4), (4, 5), (1, 3), (2, 5)]).unwrap();
        assert!(!is_tail_connected(&seq));
        let r = normalize_tail(&seq).unwrap();
        assert_eq!(r.outcome, TailOutcome::TailConnected);
        assert!(r.swaps > 0);
        assert!(is_tail_connected(&r.sequence));
        assert_eq!(final_state(&r.sequence), final_state(&seq));
        let before = call_gains(&seq);
        let after = call_gains(&r.sequence);
        for (p, &j) in r.order.iter().enumerate() {
            assert_eq!(after[p], before[j]);
        }
    }

    #[test]
    fn too_short() {
        let seq = CallSequence::from_pairs(6, &[(1, 2)]).unwrap();
        assert!(matches!(normalize_tail(&seq), Err(GossipError::Precondition(_))));
    }
}
