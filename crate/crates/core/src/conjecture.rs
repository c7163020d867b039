//! Compares sequences in which every call gains as much as possible right
//! away with the global optimum.

use std::ops::Range;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{GossipError, Result};
use crate::model::CallSequence;
use crate::packed::{all_moves, check_search_params, Move, Packed};
use crate::search::{max_total_knowledge, min_calls_full, Aborted, Budget, Counter, SearchConfig, SearchStatus};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrontierReport {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub status: SearchStatus,
    pub max_n: Option<u32>,
    pub witness: Option<CallSequence>,
    pub sequences_explored: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum StateKey {
    Canonical(u64),
    Raw(Packed),
}

struct Frontier<'a, 'b> {
    n: usize,
    moves: &'a [Move],
    dedup: bool,
    memo: FxHashMap<(StateKey, usize), u32>,
    counter: Counter<'b>,
}

impl Frontier<'_, '_> {
    fn key(&self, st: &Packed) -> StateKey {
        st.key(self.n).map_or(StateKey::Raw(*st), StateKey::Canonical)
    }

    /// Moves of maximal gain from `st`, with the resulting states.
    fn greedy_moves(&self, st: &Packed) -> Vec<(Move, u32, Packed)> {
        let mut best = 0;
        let mut out = Vec::new();
        for mv in self.moves {
            let (g, next) = st.apply(mv);
            if g > best {
                best = g;
                out.clear();
            }
            if g == best {
                out.push((*mv, g, next));
            }
        }
        out
    }

    /// Best total gain over the greedy continuations of length `rem`.
    fn solve(&mut self, st: &Packed, rem: usize) -> std::result::Result<u32, Aborted> {
        self.counter.tick()?;
        if rem == 0 {
            return Ok(0);
        }
        let memo_key = (self.key(st), rem);
        if self.dedup {
            if let Some(&v) = self.memo.get(&memo_key) {
                return Ok(v);
            }
        }
        let mut children = self.greedy_moves(st);
        if self.dedup {
            let mut seen = rustc_hash::FxHashSet::default();
            children.retain(|(_, _, next)| seen.insert(self.key(next)));
        }
        let mut best = 0;
        for (_, g, next) in children {
            best = best.max(g + self.solve(&next, rem - 1)?);
        }
        if self.dedup {
            self.memo.insert(memo_key, best);
        }
        Ok(best)
    }
}

/// Maximum N over sequences of `m` calls of size `k` in which every call
/// achieves the largest gain available at its moment. All ties are
/// explored; with `dedup`, isomorphic states are visited once.
pub fn greedy_frontier(n: usize, k: usize, m: usize, config: &SearchConfig, dedup: bool) -> Result<FrontierReport> {
    check_search_params(n, k)?;
    let moves = all_moves(n, k);
    let budget = Budget::new(config.budget);
    let mut fr = Frontier { n, moves: &moves, dedup, memo: FxHashMap::default(), counter: Counter::new(&budget) };
    let mut report =
        FrontierReport { n, m, k, status: SearchStatus::Inconclusive, max_n: None, witness: None, sequences_explored: 0 };

    let root = Packed::identity(n);
    let Ok(best) = fr.solve(&root, m) else {
        report.sequences_explored = config.budget;
        return Ok(report);
    };

    // lexicographically least greedy sequence reaching the best value
    let mut st = root;
    let mut need = best;
    let mut calls = Vec::with_capacity(m);
    for t in 0..m {
        let mut chosen = None;
        for (mv, g, next) in fr.greedy_moves(&st) {
            let Ok(rest) = fr.solve(&next, m - t - 1) else {
                report.sequences_explored = config.budget;
                return Ok(report);
            };
            if g + rest == need {
                chosen = Some((mv, g, next));
                break;
            }
        }
        let (mv, g, next) = chosen.expect("the optimum is reached by some greedy move");
        calls.push(mv.to_call());
        need -= g;
        st = next;
    }

    report.status = SearchStatus::Ok;
    report.max_n = Some(n as u32 + best);
    report.witness = Some(CallSequence::new(n, calls)?);
    report.sequences_explored = fr.counter.nodes;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub status: SearchStatus,
    pub global_max: Option<u32>,
    pub greedy_frontier_max: Option<u32>,
    pub greedy_sequences_explored: u64,
    pub global_nodes_explored: u64,
    pub agrees: Option<bool>,
}

/// One report per `m` in `m_range`, which must lie below the least number
/// of calls that informs everyone.
pub fn probe_conjecture(n: usize, k: usize, m_range: Range<usize>, config: &SearchConfig) -> Result<Vec<ConjectureReport>> {
    check_search_params(n, k)?;
    if m_range.is_empty() {
        return Ok(Vec::new());
    }
    let min = min_calls_full(n, k, config)?;
    match min.min_calls {
        Some(c) if m_range.end > c => {
            return Err(GossipError::OutOfRange(format!(
                "m must stay below {c}, the least number of calls informing everyone (n = {n}, k = {k})"
            )))
        }
        Some(_) => {}
        None => {
            return Err(GossipError::OutOfRange(format!(
                "could not determine the least number of calls for n = {n}, k = {k} within the budget"
            )))
        }
    }

    m_range
        .map(|m| {
            let global = max_total_knowledge(n, m, k, config)?;
            let greedy = greedy_frontier(n, k, m, config, true)?;
            let status = if global.status == SearchStatus::Ok && greedy.status == SearchStatus::Ok {
                SearchStatus::Ok
            } else {
                SearchStatus::Inconclusive
            };
            let agrees = match (global.max_n, greedy.max_n) {
                (Some(a), Some(b)) => Some(a == b),
                _ => None,
            };
            Ok(ConjectureReport {
                n,
                k,
                m,
                status,
                global_max: global.max_n,
                greedy_frontier_max: greedy.max_n,
                greedy_sequences_explored: greedy.sequences_explored,
                global_nodes_explored: global.nodes_explored,
                agrees,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::theorem_optimum;
    use crate::model::{call_gains, final_state};

    fn frontier(n: usize, k: usize, m: usize) -> FrontierReport {
        greedy_frontier(n, k, m, &SearchConfig::default(), true).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(frontier(4, 2, 1).max_n, Some(6));
        assert_eq!(frontier(5, 2, 5).max_n, Some(22));
        // the three callers know 9 items between them; the two others add 2
        let r = frontier(5, 3, 1);
        assert_eq!(r.max_n, Some(11));
        let end = final_state(&r.witness.unwrap());
        assert_eq!(end.rows().iter().filter(|r| r.count_ones() == 3).count(), 3);
        assert_eq!(frontier(3, 2, 0).max_n, Some(3));
    }

    #[test]
    fn witness_is_greedy_and_attains() {
        for (n, k, m) in [(5, 2, 5), (5, 3, 3), (6, 2, 7)] {
            let r = frontier(n, k, m);
            let w = r.witness.unwrap();
            assert_eq!(final_state(&w).total(), r.max_n.unwrap());
            // each call's gain is the best available at that moment
            let gains = call_gains(&w);
            let mut st = Packed::identity(n);
            for (mv, g) in w.calls().iter().zip(gains) {
                let best = all_moves(n, k).iter().map(|c| st.gain(c)).max().unwrap();
                assert_eq!(g, best);
                let members: Vec<usize> = mv.members().iter().map(|d| d.number()).collect();
                let mv = *all_moves(n, k).iter().find(|c| c.members().iter().map(|&x| x as usize + 1).eq(members.iter().copied())).unwrap();
                st = st.apply(&mv).1;
            }
        }
    }

    #[test]
    fn dedup_is_sound() {
        for n in 2..=4 {
            for k in 2..=n {
                for m in 0..=5 {
                    let cfg = SearchConfig::default();
                    let a = greedy_frontier(n, k, m, &cfg, true).unwrap();
                    let b = greedy_frontier(n, k, m, &cfg, false).unwrap();
                    assert_eq!(a.max_n, b.max_n, "n={n} k={k} m={m}");
                    assert!(a.sequences_explored <= b.sequences_explored);
                }
            }
        }
    }

    #[test]
    fn pairs_match_theorem() {
        for n in 4..=6 {
            for m in 0..=2 * n - 5 {
                assert_eq!(frontier(n, 2, m).max_n, Some(theorem_optimum(n, m).unwrap()), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn probe_reports() {
        let cfg = SearchConfig::default();
        let r = probe_conjecture(4, 2, 0..4, &cfg).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|c| c.agrees == Some(true)));
        assert!(probe_conjecture(4, 2, 0..0, &cfg).unwrap().is_empty());
        assert!(probe_conjecture(4, 2, 0..5, &cfg).is_err());
        for c in probe_conjecture(5, 3, 0..3, &cfg).unwrap() {
            assert!(c.greedy_frontier_max.unwrap() <= c.global_max.unwrap());
        }
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let r = greedy_frontier(6, 2, 6, &SearchConfig::with_budget(5), true).unwrap();
        assert_eq!(r.status, SearchStatus::Inconclusive);
        assert_eq!(r.max_n, None);
    }
}
