//! Call sequences, knowledge states and the simulation that links them.
//!
//! Dons are numbered `1..=n` in every external surface. Internally a don is a
//! bit position in a `u64`, so a knowledge state is one word per don and a
//! call is a single union over its participants' rows.

use std::fmt;

use serde::ser::{Serialize, SerializeSeq, SerializeStruct, Serializer};

use crate::error::{GossipError, Result};

/// Largest number of dons a [`KnowledgeState`] row can hold.
pub const MAX_DONS: usize = 64;

/// A don, stored 0-based and displayed 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DonId(u8);

impl DonId {
    /// Builds a don from its external 1-based number.
    pub fn new(number: usize) -> Result<Self> {
        if number == 0 || number > MAX_DONS {
            return Err(GossipError::DonOutOfRange { don: number, n: MAX_DONS });
        }
        Ok(DonId((number - 1) as u8))
    }

    pub(crate) fn from_index(index: usize) -> Self {
        debug_assert!(index < MAX_DONS);
        DonId(index as u8)
    }

    /// 0-based position.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// 1-based number.
    pub fn number(self) -> usize {
        self.0 as usize + 1
    }

    pub fn bit(self) -> u64 {
        1u64 << self.0
    }
}

impl fmt::Display for DonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A set of dons as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct DonSet(pub u64);

impl DonSet {
    pub fn contains(self, don: DonId) -> bool {
        self.0 & don.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = DonId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(DonId::from_index(i))
        })
    }

    /// 1-based numbers in increasing order.
    pub fn numbers(self) -> Vec<usize> {
        self.iter().map(DonId::number).collect()
    }
}

impl FromIterator<DonId> for DonSet {
    fn from_iter<I: IntoIterator<Item = DonId>>(iter: I) -> Self {
        DonSet(iter.into_iter().fold(0, |acc, d| acc | d.bit()))
    }
}

/// One instantaneous call among two or more distinct dons.
///
/// The participants keep the order they were written in; comparisons and
/// the witness tie-break use the sorted tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Call {
    members: Vec<DonId>,
    mask: u64,
}

impl Call {
    /// Builds a call from 1-based don numbers.
    pub fn new(numbers: &[usize]) -> Result<Self> {
        let members = numbers
            .iter()
            .map(|&x| DonId::new(x))
            .collect::<Result<Vec<_>>>()?;
        Self::from_dons(members)
    }

    pub fn pair(u: usize, v: usize) -> Result<Self> {
        Self::new(&[u, v])
    }

    pub fn from_dons(members: Vec<DonId>) -> Result<Self> {
        if members.len() < 2 {
            return Err(GossipError::CallTooSmall(members.len()));
        }
        let mut mask = 0u64;
        for d in &members {
            if mask & d.bit() != 0 {
                return Err(GossipError::DuplicateParticipant(d.number()));
            }
            mask |= d.bit();
        }
        Ok(Call { members, mask })
    }

    /// Internal constructor for masks that are known to hold ≥ 2 dons.
    pub(crate) fn from_mask(mask: u64) -> Self {
        debug_assert!(mask.count_ones() >= 2);
        let members = DonSet(mask).iter().collect();
        Call { members, mask }
    }

    pub fn members(&self) -> &[DonId] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn dons(&self) -> DonSet {
        DonSet(self.mask)
    }

    pub fn contains(&self, don: DonId) -> bool {
        self.mask & don.bit() != 0
    }

    pub fn is_disjoint(&self, other: &Call) -> bool {
        self.mask & other.mask == 0
    }

    /// Sorted 1-based participant tuple.
    pub fn sorted_numbers(&self) -> Vec<usize> {
        DonSet(self.mask).numbers()
    }

    /// Highest 1-based participant number.
    pub fn max_number(&self) -> usize {
        64 - self.mask.leading_zeros() as usize
    }
}

impl fmt::Display for Call {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Call {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.members.len()))?;
        for d in &self.members {
            seq.serialize_element(&d.number())?;
        }
        seq.end()
    }
}

/// An ordered list of calls over `n` dons: call `t` (1-based) happens at time `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CallSequence {
    n: usize,
    calls: Vec<Call>,
}

impl CallSequence {
    pub fn new(n: usize, calls: Vec<Call>) -> Result<Self> {
        if n == 0 || n > MAX_DONS {
            return Err(GossipError::BadDonCount { n, max: MAX_DONS });
        }
        for call in &calls {
            let top = call.max_number();
            if top > n {
                return Err(GossipError::DonOutOfRange { don: top, n });
            }
        }
        Ok(CallSequence { n, calls })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// Convenience constructor from 1-based pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let calls = pairs
            .iter()
            .map(|&(u, v)| Call::pair(u, v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, calls)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of calls.
    pub fn len(&self) -> usize {
        self.calls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.calls.is_empty()
    }

    pub fn calls(&self) -> &[Call] {
        &self.calls
    }

    /// The call at 1-based time `t`.
    pub fn call_at(&self, t: usize) -> Result<&Call> {
        if t == 0 || t > self.calls.len() {
            return Err(GossipError::TimeOutOfRange { t, m: self.calls.len() });
        }
        Ok(&self.calls[t - 1])
    }

    /// The common call size if all calls have the same number of participants.
    pub fn uniform_size(&self) -> Option<usize> {
        let k = self.calls.first()?.size();
        self.calls.iter().all(|c| c.size() == k).then_some(k)
    }

    pub fn dons(&self) -> impl Iterator<Item = DonId> {
        (0..self.n).map(DonId::from_index)
    }
}

impl fmt::Display for CallSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} [", self.n)?;
        for (i, c) in self.calls.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for CallSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CallSequence", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("calls", &self.calls)?;
        st.end()
    }
}

/// `rows[i]` has bit `j` set iff don `i` knows gossip item `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KnowledgeState {
    rows: Vec<u64>,
}

impl KnowledgeState {
    /// Everyone knows only their own item.
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DONS);
        KnowledgeState { rows: (0..n).map(|i| 1u64 << i).collect() }
    }

    /// Everyone knows everything.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_DONS);
        let all = full_mask(n);
        KnowledgeState { rows: vec![all; n] }
    }

    /// Builds a state from raw rows, checking that every don knows her own item.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_DONS {
            return Err(GossipError::BadDonCount { n, max: MAX_DONS });
        }
        let all = full_mask(n);
        for (i, &r) in rows.iter().enumerate() {
            if r & (1u64 << i) == 0 || r & !all != 0 {
                return Err(GossipError::Precondition(format!("row {} is not a valid knowledge row", i + 1)));
            }
        }
        Ok(KnowledgeState { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, don: DonId) -> DonSet {
        DonSet(self.rows[don.index()])
    }

    pub fn knows(&self, don: DonId, item: DonId) -> bool {
        self.rows[don.index()] & item.bit() != 0
    }

    /// Dons that know gossip `item`.
    pub fn knowers(&self, item: DonId) -> DonSet {
        let bit = item.bit();
        DonSet(
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, &r)| r & bit != 0)
                .fold(0, |acc, (i, _)| acc | (1u64 << i)),
        )
    }

    /// N: the number of (don, item) pairs with the don knowing the item.
    pub fn total(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    pub fn is_full(&self) -> bool {
        let all = full_mask(self.n());
        self.rows.iter().all(|&r| r == all)
    }

    /// Union of the participants' rows.
    pub fn joint_knowledge(&self, call: &Call) -> u64 {
        call.members().iter().fold(0, |acc, d| acc | self.rows[d.index()])
    }

    /// Increase of N that `call` would cause.
    pub fn gain(&self, call: &Call) -> u32 {
        let union = self.joint_knowledge(call).count_ones();
        call.members()
            .iter()
            .map(|d| union - self.rows[d.index()].count_ones())
            .sum()
    }

    /// Applies `call` in place and returns the increase of N.
    pub fn apply(&mut self, call: &Call) -> u32 {
        let union = self.joint_knowledge(call);
        let mut gain = 0;
        for d in call.members() {
            let row = &mut self.rows[d.index()];
            gain += (union & !*row).count_ones();
            *row = union;
        }
        gain
    }

    /// Entrywise `self ⊆ other`.
    pub fn is_subset_of(&self, other: &KnowledgeState) -> bool {
        self.n() == other.n() && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// States before any call and after each call: `m + 1` entries.
pub fn simulate(seq: &CallSequence) -> Vec<KnowledgeState> {
    let mut state = KnowledgeState::identity(seq.n());
    let mut out = Vec::with_capacity(seq.len() + 1);
    out.push(state.clone());
    for call in seq.calls() {
        state.apply(call);
        out.push(state.clone());
    }
    out
}

/// Final state only.
pub fn final_state(seq: &CallSequence) -> KnowledgeState {
    let mut state = KnowledgeState::identity(seq.n());
    for call in seq.calls() {
        state.apply(call);
    }
    state
}

/// N-increment of each call, in time order.
pub fn call_gains(seq: &CallSequence) -> Vec<u32> {
    let mut state = KnowledgeState::identity(seq.n());
    seq.calls().iter().map(|c| state.apply(c)).collect()
}

pub fn total_knowledge(state: &KnowledgeState) -> u32 {
    state.total()
}

/// Dons reachable from the participants of call `t` by temporal paths that
/// only use calls at times `>= t`. The participants themselves are included.
pub fn temporal_reach_from_call(seq: &CallSequence, t: usize) -> Result<DonSet> {
    let start = seq.call_at(t)?.mask();
    Ok(DonSet(reach_after(seq, start, t)))
}

/// Spreads `set` forward through calls at (0-based) positions `from..`.
fn reach_after(seq: &CallSequence, mut set: u64, from: usize) -> u64 {
    for call in &seq.calls()[from..] {
        if call.mask() & set != 0 {
            set |= call.mask();
        }
    }
    set
}

/// Per-don statistics of a finished sequence.
///
/// `a[i]`: dons knowing gossip `i`; `b[i]`: items don `i` knows;
/// `c[i]`: calls irrelevant to don `i`; `d[i]`: calls containing don `i`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GossipStats {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
    pub d: Vec<u32>,
    pub total: u32,
}

/// A call counts towards `c[i]` when no participant knows gossip `i` right
/// after it, don `i` is not a participant, and no temporal path from the
/// participants through later calls reaches don `i`.
pub fn compute_stats(seq: &CallSequence) -> GossipStats {
    let n = seq.n();
    let trajectory = simulate(seq);
    let last = trajectory.last().expect("trajectory is never empty");

    let b = last.rows().iter().map(|r| r.count_ones()).collect();
    let a = seq.dons().map(|i| last.knowers(i).len() as u32).collect();
    let d = seq
        .dons()
        .map(|i| seq.calls().iter().filter(|c| c.contains(i)).count() as u32)
        .collect();

    let reach: Vec<u64> = (0..seq.len()).map(|t| reach_after(seq, seq.calls()[t].mask(), t + 1)).collect();
    let mut c = vec![0u32; n];
    for (t, call) in seq.calls().iter().enumerate() {
        let after = &trajectory[t + 1];
        let joint = after.joint_knowledge(call);
        for i in seq.dons() {
            let passes = joint & i.bit() != 0;
            let informs = reach[t] & i.bit() != 0;
            if !passes && !informs {
                c[i.index()] += 1;
            }
        }
    }

    GossipStats { a, b, c, d, total: last.total() }
}

/// True iff some call with don `i` has another participant who already knew
/// gossip `i`, i.e. the item came back to her along a temporal cycle.
pub fn hears_own_gossip(seq: &CallSequence, i: DonId) -> bool {
    own_gossip_return_time(seq, i).is_some()
}

/// The 1-based time of the first call in which don `i` hears her own item.
pub fn own_gossip_return_time(seq: &CallSequence, i: DonId) -> Option<usize> {
    if i.index() >= seq.n() {
        return None;
    }
    let mut state = KnowledgeState::identity(seq.n());
    for (t, call) in seq.calls().iter().enumerate() {
        if call.contains(i) {
            let others = call.mask() & !i.bit();
            let returned = DonSet(others).iter().any(|w| state.knows(w, i));
            if returned {
                return Some(t + 1);
            }
        }
        state.apply(call);
    }
    None
}

/// True iff no don hears her own gossip.
pub fn nobody_hears_own(seq: &CallSequence) -> bool {
    seq.dons().all(|i| !hears_own_gossip(seq, i))
}

/// Same calls in reverse order.
pub fn reverse(seq: &CallSequence) -> CallSequence {
    let mut calls = seq.calls().to_vec();
    calls.reverse();
    CallSequence { n: seq.n(), calls }
}

/// A temporal path: calls at strictly increasing times, each sharing a don
/// with the next, carrying news from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalPath {
    pub start: DonId,
    pub end: DonId,
    /// 1-based call times, strictly increasing.
    pub times: Vec<usize>,
    /// Dons visited: `start`, then the don entered at each call.
    pub dons: Vec<DonId>,
}

impl TemporalPath {
    /// Checks the path against `seq`.
    pub fn is_valid_in(&self, seq: &CallSequence) -> bool {
        if self.dons.len() != self.times.len() + 1
            || self.dons.first() != Some(&self.start)
            || self.dons.last() != Some(&self.end)
        {
            return false;
        }
        if self.times.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        self.times.iter().enumerate().all(|(j, &t)| {
            seq.call_at(t)
                .map(|c| c.contains(self.dons[j]) && c.contains(self.dons[j + 1]))
                .unwrap_or(false)
        })
    }
}

/// Earliest-arrival temporal path from `from` to `to` using calls at times
/// strictly between `after` and `before` (1-based, exclusive), skipping any
/// call that contains a don in `avoid`.
pub fn find_temporal_path(
    seq: &CallSequence,
    from: DonId,
    to: DonId,
    after: usize,
    before: usize,
    avoid: DonSet,
) -> Option<TemporalPath> {
    if from == to {
        return Some(TemporalPath { start: from, end: to, times: vec![], dons: vec![from] });
    }
    let n = seq.n();
    // reached_by[d] = (time, predecessor) of the call that first brought the news to d
    let mut reached_by: Vec<Option<(usize, DonId)>> = vec![None; n];
    let mut reached = from.bit();
    let hi = before.min(seq.len() + 1);
    for t in (after + 1)..hi {
        let call = &seq.calls()[t - 1];
        if call.mask() & avoid.0 != 0 || call.mask() & reached == 0 {
            continue;
        }
        let carrier = DonSet(call.mask() & reached).iter().next().expect("non-empty");
        for d in call.members() {
            if reached & d.bit() == 0 {
                reached_by[d.index()] = Some((t, carrier));
            }
        }
        reached |= call.mask();
        if reached & to.bit() != 0 {
            break;
        }
    }
    if reached & to.bit() == 0 {
        return None;
    }
    let mut times = Vec::new();
    let mut dons = vec![to];
    let mut cur = to;
    while cur != from {
        let (t, prev) = reached_by[cur.index()].expect("reached don has a predecessor");
        times.push(t);
        dons.push(prev);
        cur = prev;
    }
    times.reverse();
    dons.reverse();
    Some(TemporalPath { start: from, end: to, times, dons })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn don(x: usize) -> DonId {
        DonId::new(x).unwrap()
    }

    /// Independent oracle: depth-first enumeration of temporal paths.
    fn path_exists(seq: &CallSequence, from: usize, to: usize) -> bool {
        fn go(seq: &CallSequence, at: usize, to: usize, after: usize) -> bool {
            if at == to {
                return true;
            }
            for t in after..seq.len() {
                let c = &seq.calls()[t];
                if c.contains(DonId::from_index(at)) {
                    for w in c.members() {
                        if w.index() != at && go(seq, w.index(), to, t + 1) {
                            return true;
                        }
                    }
                }
            }
            false
        }
        go(seq, from, to, 0)
    }

    #[test]
    fn rejects_bad_calls() {
        assert_eq!(Call::new(&[1]), Err(GossipError::CallTooSmall(1)));
        assert_eq!(Call::new(&[2, 2]), Err(GossipError::DuplicateParticipant(2)));
        assert!(matches!(
            CallSequence::from_pairs(3, &[(1, 4)]),
            Err(GossipError::DonOutOfRange { don: 4, n: 3 })
        ));
        assert!(Call::new(&[0, 1]).is_err());
    }

    #[test]
    fn star_prefix_total() {
        let seq = CallSequence::from_pairs(5, &[(2, 1), (3, 1), (4, 1), (5, 1), (1, 2)]).unwrap();
        assert_eq!(final_state(&seq).total(), 22);
    }

    #[test]
    fn empty_sequence_total() {
        let seq = CallSequence::empty(4).unwrap();
        let traj = simulate(&seq);
        assert_eq!(traj.len(), 1);
        assert_eq!(traj[0].total(), 4);
    }

    #[test]
    fn two_calls_rows() {
        let seq = CallSequence::from_pairs(4, &[(1, 2), (1, 3)]).unwrap();
        let last = final_state(&seq);
        assert_eq!(last.total(), 9);
        assert_eq!(last.row(don(1)).numbers(), vec![1, 2, 3]);
        assert_eq!(last.row(don(2)).numbers(), vec![1, 2]);
        assert_eq!(last.row(don(3)).numbers(), vec![1, 2, 3]);
        assert_eq!(last.row(don(4)).numbers(), vec![4]);
        for i in 1..=4 {
            for j in 1..=4 {
                assert_eq!(last.knows(don(i), don(j)), path_exists(&seq, j - 1, i - 1));
            }
        }
    }

    #[test]
    fn total_knowledge_examples() {
        assert_eq!(total_knowledge(&KnowledgeState::identity(7)), 7);
        assert_eq!(total_knowledge(&KnowledgeState::full(5)), 25);
        let seq = CallSequence::from_pairs(4, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!(total_knowledge(&final_state(&seq)), 8);
    }

    #[test]
    fn stats_star_prefix() {
        let seq = CallSequence::from_pairs(5, &[(2, 1), (3, 1), (4, 1), (5, 1), (1, 2)]).unwrap();
        let s = compute_stats(&seq);
        assert_eq!((s.a[0], s.b[0], s.d[0], s.c[0]), (5, 5, 5, 0));
        assert_eq!((s.a[2], s.b[2], s.d[2], s.c[2]), (5, 3, 1, 0));
        assert_eq!(s.a.iter().sum::<u32>(), s.total);
        assert_eq!(s.b.iter().sum::<u32>(), s.total);
    }

    #[test]
    fn stats_single_call() {
        let seq = CallSequence::from_pairs(2, &[(1, 2)]).unwrap();
        let s = compute_stats(&seq);
        assert_eq!(s.a, vec![2, 2]);
        assert_eq!(s.b, vec![2, 2]);
        assert_eq!(s.d, vec![1, 1]);
        assert_eq!(s.c, vec![0, 0]);
        assert_eq!(s.total, 4);
    }

    #[test]
    fn stats_count_irrelevant_calls() {
        // (3,4) neither carries gossip 1 nor leads back to don 1
        let seq = CallSequence::from_pairs(4, &[(1, 2), (3, 4)]).unwrap();
        let s = compute_stats(&seq);
        assert_eq!(s.c, vec![1, 1, 1, 1]);
    }

    #[test]
    fn reach_from_call() {
        let seq = CallSequence::from_pairs(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(temporal_reach_from_call(&seq, 2).unwrap().numbers(), vec![2, 3, 4]);
        assert_eq!(temporal_reach_from_call(&seq, 3).unwrap().numbers(), vec![3, 4]);
        assert!(matches!(temporal_reach_from_call(&seq, 0), Err(GossipError::TimeOutOfRange { .. })));
        assert!(matches!(temporal_reach_from_call(&seq, 4), Err(GossipError::TimeOutOfRange { .. })));

        let seq = CallSequence::from_pairs(4, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!(temporal_reach_from_call(&seq, 1).unwrap().numbers(), vec![1, 2]);
    }

    #[test]
    fn own_gossip_examples() {
        let seq = CallSequence::from_pairs(3, &[(3, 1), (1, 2), (2, 3)]).unwrap();
        assert!(hears_own_gossip(&seq, don(3)));
        assert!(!hears_own_gossip(&seq, don(1)));

        let seq = CallSequence::from_pairs(2, &[(1, 2), (1, 2)]).unwrap();
        assert!(hears_own_gossip(&seq, don(1)));
        assert!(hears_own_gossip(&seq, don(2)));
        assert_eq!(own_gossip_return_time(&seq, don(1)), Some(2));
    }

    #[test]
    fn reverse_swaps_a_and_b() {
        let seq = CallSequence::from_pairs(5, &[(2, 1), (3, 1), (4, 1), (5, 1)]).unwrap();
        let fwd = compute_stats(&seq);
        let back = compute_stats(&reverse(&seq));
        assert_eq!(fwd.b, vec![5, 2, 3, 4, 5]);
        assert_eq!(back.a, fwd.b);
        assert_eq!(back.b, fwd.a);

        let empty = CallSequence::empty(3).unwrap();
        assert_eq!(reverse(&empty), empty);

        let one = CallSequence::from_pairs(3, &[(1, 3)]).unwrap();
        assert_eq!(reverse(&one), one);
        let s = compute_stats(&one);
        assert_eq!(s.a, s.b);
    }

    #[test]
    fn finds_earliest_path() {
        let seq = CallSequence::from_pairs(5, &[(1, 2), (2, 3), (1, 4), (3, 5), (4, 5)]).unwrap();
        let p = find_temporal_path(&seq, don(1), don(5), 0, 6, DonSet::default()).unwrap();
        assert!(p.is_valid_in(&seq));
        assert_eq!(p.times, vec![1, 2, 4]);
        assert!(find_temporal_path(&seq, don(5), don(1), 0, 6, DonSet::default()).is_none());
        let avoid: DonSet = [don(3)].into_iter().collect();
        let p = find_temporal_path(&seq, don(1), don(5), 0, 6, avoid).unwrap();
        assert_eq!(p.times, vec![3, 5]);
    }

    #[test]
    fn k_calls_merge_all_rows() {
        let seq = CallSequence::new(5, vec![Call::new(&[1, 2, 3]).unwrap()]).unwrap();
        assert_eq!(final_state(&seq).total(), 11);
        assert_eq!(seq.uniform_size(), Some(3));
    }
}
