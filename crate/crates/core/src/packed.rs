//! Fixed-size state representation used by the search loops.

use crate::canon::{refined_key, CANON_LIMIT};
use crate::error::{GossipError, Result};
use crate::model::Call;

/// Largest `n` the exhaustive searches accept.
pub const SEARCH_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Packed {
    pub rows: [u16; SEARCH_LIMIT],
}

impl Packed {
    pub fn identity(n: usize) -> Self {
        let mut rows = [0u16; SEARCH_LIMIT];
        for (i, r) in rows.iter_mut().enumerate().take(n) {
            *r = 1 << i;
        }
        Packed { rows }
    }

    pub fn total(&self, n: usize) -> u32 {
        self.rows[..n].iter().map(|r| r.count_ones()).sum()
    }

    #[inline]
    pub fn gain(&self, mv: &Move) -> u32 {
        let mut union = 0u16;
        for &d in mv.members() {
            union |= self.rows[d as usize];
        }
        let u = union.count_ones();
        mv.members().iter().map(|&d| u - self.rows[d as usize].count_ones()).sum()
    }

    #[inline]
    pub fn apply(&self, mv: &Move) -> (u32, Packed) {
        let mut union = 0u16;
        for &d in mv.members() {
            union |= self.rows[d as usize];
        }
        let mut next = *self;
        let mut gain = 0;
        for &d in mv.members() {
            let r = &mut next.rows[d as usize];
            gain += (union & !*r).count_ones();
            *r = union;
        }
        (gain, next)
    }

    /// Canonical key when `n <= 8`, raw packing otherwise (not canonical).
    pub fn key(&self, n: usize) -> Option<u64> {
        if n > CANON_LIMIT {
            return None;
        }
        let mut small = [0u8; CANON_LIMIT];
        for (s, &r) in small.iter_mut().zip(&self.rows[..n]) {
            *s = r as u8;
        }
        Some(refined_key(&small[..n]))
    }
}

/// A call as a list of 0-based members, for the search loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Move {
    members: [u8; SEARCH_LIMIT],
    len: u8,
    pub mask: u16,
}

impl Move {
    #[inline]
    pub fn members(&self) -> &[u8] {
        &self.members[..self.len as usize]
    }

    pub fn to_call(self) -> Call {
        Call::from_mask(self.mask as u64)
    }
}

/// All `k`-subsets of `n` dons, ordered lexicographically by sorted tuple.
pub(crate) fn all_moves(n: usize, k: usize) -> Vec<Move> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        let mut members = [0u8; SEARCH_LIMIT];
        let mut mask = 0u16;
        for (slot, &d) in combo.iter().enumerate() {
            members[slot] = d as u8;
            mask |= 1 << d;
        }
        out.push(Move { members, len: k as u8, mask });
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] < n - k + i {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub(crate) fn check_search_params(n: usize, k: usize) -> Result<()> {
    if !(2..=SEARCH_LIMIT).contains(&n) {
        return Err(GossipError::BadDonCount { n, max: SEARCH_LIMIT });
    }
    if !(2..=n).contains(&k) {
        return Err(GossipError::BadCallSize { k, n });
    }
    Ok(())
}

/// Upper bound on the N-gain of one `k`-call at 1-based time `t`: the
/// participants sit in a component of at most `1 + t(k-1)` dons, so their
/// joint knowledge has at most that many items, and each already knows one.
pub fn call_gain_cap(n: usize, k: usize, t: usize) -> u32 {
    let reach = (1 + t * (k - 1)).min(n);
    (k * reach - k) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moves_are_lexicographic() {
        let mv: Vec<Vec<u8>> = all_moves(4, 2).iter().map(|m| m.members().to_vec()).collect();
        assert_eq!(mv, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(all_moves(6, 3).len(), 20);
        assert_eq!(all_moves(3, 3).len(), 1);
    }

    #[test]
    fn pairwise_cap_matches_min_2t() {
        for n in 2..10 {
            for t in 1..20 {
                assert_eq!(call_gain_cap(n, 2, t), (2 * t).min(2 * (n - 1)) as u32);
            }
        }
    }
}
