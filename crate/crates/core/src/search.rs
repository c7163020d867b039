//! Exact maximization of total knowledge over all call sequences.
//!
//! Depth-first search over knowledge states with
//!
//! * memoization on (canonical state, remaining calls), storing either the
//!   exact best gain or an upper bound from a failed window,
//! * a per-time cap on each call's gain, which also gives early exit once a
//!   node reaches its bound,
//! * deduplication of children that lead to isomorphic states, and
//! * dropping calls that gain nothing whenever some call gains something:
//!   making a useful call first never hurts what follows.
//!
//! The tree below a fixed split depth is cut into independent subproblems,
//! each solved with its own table, so node counts and results do not depend
//! on how many workers run them.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::error::Result;
use crate::formulas::{star_value, theorem_optimum};
use crate::model::{CallSequence, KnowledgeState};
use crate::packed::{all_moves, call_gain_cap, check_search_params, Move, Packed};

/// Default node budget.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const SPLIT_DEPTH: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Node limit; exceeding it makes the result inconclusive.
    pub budget: u64,
    pub workers: usize,
    pub memoize: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_BUDGET, workers: 1, memoize: true }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: u64) -> Self {
        SearchConfig { budget, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    Ok,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub status: SearchStatus,
    pub max_n: Option<u32>,
    pub witness: Option<CallSequence>,
    pub nodes_explored: u64,
    pub formula_value: Option<u32>,
    pub agrees: Option<bool>,
}

#[derive(Clone, Copy, Debug)]
enum Entry {
    Exact(i64),
    Upper(i64),
}

pub(crate) struct Aborted;

/// Shared node accounting across subproblems.
pub(crate) struct Budget {
    limit: u64,
    used: AtomicU64,
    aborted: AtomicBool,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0), aborted: AtomicBool::new(false) }
    }
}

const FLUSH: u64 = 1 << 12;

/// Counts nodes locally and reports to the shared budget in batches.
pub(crate) struct Counter<'b> {
    budget: &'b Budget,
    pub nodes: u64,
    pending: u64,
}

impl<'b> Counter<'b> {
    pub fn new(budget: &'b Budget) -> Self {
        Counter { budget, nodes: 0, pending: 0 }
    }

    #[inline]
    pub fn tick(&mut self) -> std::result::Result<(), Aborted> {
        self.nodes += 1;
        self.pending += 1;
        if self.nodes > self.budget.limit {
            self.budget.aborted.store(true, Ordering::Relaxed);
            return Err(Aborted);
        }
        if self.pending >= FLUSH {
            let total = self.budget.used.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
            self.pending = 0;
            if total > self.budget.limit || self.budget.aborted.load(Ordering::Relaxed) {
                self.budget.aborted.store(true, Ordering::Relaxed);
                return Err(Aborted);
            }
        }
        Ok(())
    }

    pub fn ok(&self) -> bool {
        !self.budget.aborted.load(Ordering::Relaxed)
    }
}

struct Engine<'a, 'b> {
    n: usize,
    full: u32,
    moves: &'a [Move],
    /// `cap_suffix[t]` = sum of per-call caps for times `t..=horizon`
    caps: &'a [u32],
    memoize: bool,
    memo: FxHashMap<(u64, u8), Entry>,
    counter: Counter<'b>,
}

struct Child {
    gain: u32,
    state: Packed,
    key: Option<u64>,
}

impl<'a, 'b> Engine<'a, 'b> {
    /// Bound on the gain of `rem` calls starting at time `t`.
    #[inline]
    fn gain_bound(&self, total: u32, t: usize, rem: usize) -> i64 {
        let by_time = (self.caps[t] - self.caps[t + rem]) as i64;
        by_time.min((self.full - total) as i64)
    }

    /// Distinct positive-gain successors, best gain first.
    fn children(&self, st: &Packed) -> Vec<Child> {
        let mut seen_keys: FxHashSet<u64> = FxHashSet::default();
        let mut seen_states: FxHashSet<Packed> = FxHashSet::default();
        let mut out = Vec::new();
        for mv in self.moves {
            if st.gain(mv) == 0 {
                continue;
            }
            let (gain, next) = st.apply(mv);
            let key = next.key(self.n);
            let fresh = match key {
                Some(k) => seen_keys.insert(k),
                None => seen_states.insert(next),
            };
            if fresh {
                out.push(Child { gain, state: next, key });
            }
        }
        out.sort_by_key(|c| std::cmp::Reverse(c.gain));
        out
    }

    fn lookup(&self, key: Option<u64>, rem: usize) -> Option<Entry> {
        if !self.memoize {
            return None;
        }
        key.and_then(|k| self.memo.get(&(k, rem as u8)).copied())
    }

    fn store(&mut self, key: Option<u64>, rem: usize, entry: Entry) {
        if !self.memoize {
            return;
        }
        if let Some(k) = key {
            let slot = self.memo.entry((k, rem as u8)).or_insert(entry);
            if let (Entry::Upper(_), Entry::Exact(_)) = (*slot, entry) {
                *slot = entry;
            } else if let (Entry::Upper(old), Entry::Upper(new)) = (*slot, entry) {
                *slot = Entry::Upper(old.min(new));
            }
        }
    }

    /// Best gain from `st` with `rem` calls left, the next at time `t`.
    /// A result above `alpha` is exact; otherwise it is an upper bound
    /// that does not exceed `alpha`.
    fn solve(&mut self, st: &Packed, key: Option<u64>, t: usize, rem: usize, alpha: i64) -> std::result::Result<i64, Aborted> {
        self.counter.tick()?;
        if rem == 0 {
            return Ok(0);
        }
        let total = st.total(self.n);
        let mut ub = self.gain_bound(total, t, rem);
        if ub <= alpha {
            return Ok(ub);
        }
        match self.lookup(key, rem) {
            Some(Entry::Exact(v)) => return Ok(v),
            Some(Entry::Upper(u)) if u <= alpha => return Ok(u),
            Some(Entry::Upper(u)) => ub = ub.min(u),
            None => {}
        }

        let children = self.children(st);
        if children.is_empty() {
            self.store(key, rem, Entry::Exact(0));
            return Ok(0);
        }
        let mut best = i64::MIN;
        for child in &children {
            let g = child.gain as i64;
            let floor = best.max(alpha);
            if g + self.gain_bound(total + child.gain, t + 1, rem - 1) <= floor {
                continue;
            }
            let v = g + self.solve(&child.state, child.key, t + 1, rem - 1, floor - g)?;
            if v > best {
                best = v;
                if best >= ub {
                    break;
                }
            }
        }
        if best > alpha {
            self.store(key, rem, Entry::Exact(best));
            Ok(best)
        } else {
            self.store(key, rem, Entry::Upper(alpha));
            Ok(alpha)
        }
    }

    /// Whether `st` can gain at least `need` within `rem` calls from time `t`.
    fn reaches(&mut self, st: &Packed, t: usize, rem: usize, need: i64) -> std::result::Result<bool, Aborted> {
        if need <= 0 {
            return Ok(true);
        }
        let key = st.key(self.n);
        Ok(self.solve(st, key, t, rem, need - 1)? >= need)
    }
}

/// Prefix-summed per-time caps, indexed by 1-based time, padded past `m`.
fn cap_table(n: usize, k: usize, m: usize) -> Vec<u32> {
    // caps[t] = sum_{s >= t, s <= m} cap(s); caps[m+1] = 0
    let mut caps = vec![0u32; m + 2];
    for t in (1..=m).rev() {
        caps[t] = caps[t + 1] + call_gain_cap(n, k, t);
    }
    caps
}

/// Upper bound on the final N reachable from `state` when the next call is
/// at time `t_next` and the last at time `m`.
pub fn admissible_bound(state: &KnowledgeState, t_next: usize, m: usize, k: usize) -> u32 {
    let n = state.n();
    let full = (n * n) as u32;
    let t_next = t_next.max(1);
    let extra: u32 = (t_next..=m).map(|t| call_gain_cap(n, k, t)).sum();
    (state.total() + extra).min(full)
}

/// A frontier node: a state reached after `depth` positive-gain calls.
struct Frontier {
    state: Packed,
    key: Option<u64>,
    depth: usize,
}

/// Distinct states after up to `depth` positive-gain calls. States with no
/// positive-gain call are kept at whatever depth they stop.
fn expand_frontier(n: usize, moves: &[Move], depth: usize) -> Vec<Frontier> {
    let root = Packed::identity(n);
    let mut level = vec![Frontier { state: root, key: root.key(n), depth: 0 }];
    let mut done = Vec::new();
    for d in 0..depth {
        let mut next = Vec::new();
        let mut seen_keys = FxHashSet::default();
        let mut seen_states = FxHashSet::default();
        for node in level {
            let mut any = false;
            for mv in moves {
                if node.state.gain(mv) == 0 {
                    continue;
                }
                any = true;
                let (_, s) = node.state.apply(mv);
                let key = s.key(n);
                let fresh = match key {
                    Some(k) => seen_keys.insert(k),
                    None => seen_states.insert(s),
                };
                if fresh {
                    next.push(Frontier { state: s, key, depth: d + 1 });
                }
            }
            if !any {
                done.push(node);
            }
        }
        level = next;
    }
    done.extend(level);
    done
}

pub(crate) fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("thread pool")
}

/// Exact maximum of N over all sequences of `m` calls of size `k` among `n` dons.
pub fn max_total_knowledge(n: usize, m: usize, k: usize, config: &SearchConfig) -> Result<SearchReport> {
    check_search_params(n, k)?;
    let moves = all_moves(n, k);
    let caps = cap_table(n, k, m + 1);
    let full = (n * n) as u32;
    let budget = Budget::new(config.budget);

    let split = SPLIT_DEPTH.min(m);
    let frontier = expand_frontier(n, &moves, split);

    let solve_one = |node: &Frontier| -> (Option<i64>, u64) {
        let mut engine = Engine {
            n,
            full,
            moves: &moves,
            caps: &caps,
            memoize: config.memoize,
            memo: FxHashMap::default(),
            counter: Counter::new(&budget),
        };
        let base = node.state.total(n) as i64 - n as i64;
        let rem = m - node.depth;
        let r = engine.solve(&node.state, node.key, node.depth + 1, rem, -1).ok().map(|g| base + g);
        (r, engine.counter.nodes)
    };

    let results: Vec<(Option<i64>, u64)> = if config.workers > 1 {
        pool(config.workers).install(|| frontier.par_iter().map(solve_one).collect())
    } else {
        frontier.iter().map(solve_one).collect()
    };

    let mut nodes: u64 = results.iter().map(|r| r.1).sum();
    let best_gain = results.iter().map(|r| r.0).collect::<Option<Vec<_>>>().map(|v| v.into_iter().max().unwrap_or(0));

    let mut report = SearchReport {
        n,
        m,
        k,
        status: SearchStatus::Inconclusive,
        max_n: None,
        witness: None,
        nodes_explored: nodes,
        formula_value: None,
        agrees: None,
    };
    if k == 2 && m + 3 <= 2 * n {
        report.formula_value = star_value(n, m).ok();
    }

    let Some(best_gain) = best_gain.filter(|_| nodes <= config.budget) else {
        report.nodes_explored = nodes.min(config.budget);
        return Ok(report);
    };

    let mut engine = Engine {
        n,
        full,
        moves: &moves,
        caps: &caps,
        memoize: config.memoize,
        memo: FxHashMap::default(),
        counter: Counter::new(&budget),
    };
    let witness = reconstruct(&mut engine, m, best_gain);
    nodes += engine.counter.nodes;
    let Some(witness) = witness.filter(|_| nodes <= config.budget) else {
        report.nodes_explored = nodes.min(config.budget);
        return Ok(report);
    };

    let max_n = (n as i64 + best_gain) as u32;
    let witness = CallSequence::new(n, witness.into_iter().map(Move::to_call).collect())?;
    report.status = SearchStatus::Ok;
    report.max_n = Some(max_n);
    report.witness = Some(witness);
    report.nodes_explored = nodes;
    if m + 5 <= 2 * n {
        report.agrees = report.formula_value.map(|f| f == max_n);
    }
    Ok(report)
}

/// Lexicographically least sequence reaching `target` gain.
fn reconstruct(engine: &mut Engine<'_, '_>, m: usize, target: i64) -> Option<Vec<Move>> {
    let n = engine.n;
    let mut st = Packed::identity(n);
    let mut need = target;
    let mut out = Vec::with_capacity(m);
    for t in 1..=m {
        let mut chosen = None;
        for mv in engine.moves {
            let (g, next) = st.apply(mv);
            if engine.reaches(&next, t + 1, m - t, need - g as i64).ok()? {
                chosen = Some((*mv, g, next));
                break;
            }
        }
        let (mv, g, next) = chosen?;
        out.push(mv);
        need -= g as i64;
        st = next;
    }
    (need <= 0 && engine.counter.ok()).then_some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremCheck {
    pub n: usize,
    pub verdict: Verdict,
    pub reports: Vec<SearchReport>,
}

/// Searches every `m` in `0..=2n-5` and compares with the star optimum.
pub fn verify_theorem(n: usize, config: &SearchConfig) -> Result<TheoremCheck> {
    theorem_optimum(n, 0)?;
    let mut reports = Vec::new();
    for m in 0..=(2 * n - 5) {
        let mut r = max_total_knowledge(n, m, 2, config)?;
        let opt = theorem_optimum(n, m)?;
        r.formula_value = Some(opt);
        r.agrees = r.max_n.map(|v| v == opt);
        reports.push(r);
    }
    let verdict = if reports.iter().any(|r| r.status == SearchStatus::Inconclusive) {
        Verdict::Inconclusive
    } else if reports.iter().all(|r| r.agrees == Some(true)) {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(TheoremCheck { n, verdict, reports })
}

#[derive(Clone, Debug, Serialize)]
pub struct MinCallsReport {
    pub n: usize,
    pub k: usize,
    pub status: SearchStatus,
    pub min_calls: Option<usize>,
    pub witness: Option<CallSequence>,
    pub nodes_explored: u64,
}

/// Least `m` for which some `m`-call sequence informs everyone of everything.
pub fn min_calls_full(n: usize, k: usize, config: &SearchConfig) -> Result<MinCallsReport> {
    if n == 1 {
        return Ok(MinCallsReport {
            n,
            k,
            status: SearchStatus::Ok,
            min_calls: Some(0),
            witness: Some(CallSequence::empty(1)?),
            nodes_explored: 0,
        });
    }
    check_search_params(n, k)?;
    let full = (n * n) as u32;
    let mut nodes = 0u64;
    // gathering everything at one don and sending it back always works
    let ceiling = 2 * (n - 1).div_ceil(k - 1);
    for m in 0..=ceiling {
        let cfg = SearchConfig { budget: config.budget.saturating_sub(nodes), ..*config };
        let r = max_total_knowledge(n, m, k, &cfg)?;
        nodes += r.nodes_explored;
        match r.status {
            SearchStatus::Inconclusive => {
                return Ok(MinCallsReport { n, k, status: SearchStatus::Inconclusive, min_calls: None, witness: None, nodes_explored: nodes });
            }
            SearchStatus::Ok if r.max_n == Some(full) => {
                return Ok(MinCallsReport { n, k, status: SearchStatus::Ok, min_calls: Some(m), witness: r.witness, nodes_explored: nodes });
            }
            SearchStatus::Ok => {}
        }
    }
    unreachable!("complete gossip is always possible within {ceiling} calls")
}
