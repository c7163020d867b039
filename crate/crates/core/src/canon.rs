//! Canonical forms of knowledge states under renaming of dons.
//!
//! Renaming don `i` to `p(i)` moves row `i` to row `p(i)` and permutes the
//! bits of every row the same way, since gossip `j` belongs to don `j`.

use serde::Serialize;

use crate::error::{GossipError, Result};
use crate::model::KnowledgeState;

/// Largest `n` for which states are canonicalized.
pub const CANON_LIMIT: usize = 8;

/// Rows of a state with `n <= 8`, one byte each, row 0 in the most
/// significant used byte. Two states are isomorphic iff their keys agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalKey(pub u64);

/// `perm[i]` is the new label of don `i` (0-based).
pub fn apply_permutation(state: &KnowledgeState, perm: &[usize]) -> KnowledgeState {
    let n = state.n();
    assert_eq!(perm.len(), n);
    let mut rows = vec![0u64; n];
    for (i, &row) in state.rows().iter().enumerate() {
        let mut mapped = 0u64;
        let mut bits = row;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            mapped |= 1u64 << perm[j];
        }
        rows[perm[i]] = mapped;
    }
    KnowledgeState::from_rows(rows).expect("a relabelled state is valid")
}

fn check_limit(n: usize) -> Result<()> {
    if n > CANON_LIMIT {
        return Err(GossipError::OutOfRange(format!(
            "canonicalization supports n <= {CANON_LIMIT}, got {n}"
        )));
    }
    Ok(())
}

/// Encoding of the state seen through `order`, where `order[a]` is the don
/// placed at position `a`.
#[inline]
fn encode(rows: &[u8], order: &[usize]) -> u64 {
    let mut key = 0u64;
    for &v in order {
        let row = rows[v];
        let mut out = 0u8;
        for (b, &w) in order.iter().enumerate() {
            out |= ((row >> w) & 1) << b;
        }
        key = (key << 8) | out as u64;
    }
    key
}

fn small_rows(state: &KnowledgeState) -> Vec<u8> {
    state.rows().iter().map(|&r| r as u8).collect()
}

/// Minimum encoding over all `n!` relabellings.
pub fn canonicalize(state: &KnowledgeState) -> Result<CanonicalKey> {
    check_limit(state.n())?;
    let rows = small_rows(state);
    let n = rows.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = encode(&rows, &order);
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            best = best.min(encode(&rows, &order));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(CanonicalKey(best))
}

/// A canonical key computed over the relabellings that sort dons by a
/// refined invariant (row size, column size, and the multisets of those of
/// neighbours). Isomorphic states get equal keys; it is usually much
/// cheaper than [`canonicalize`] but the key values differ from it.
pub fn canonical_key(state: &KnowledgeState) -> Result<CanonicalKey> {
    check_limit(state.n())?;
    Ok(CanonicalKey(refined_key(&small_rows(state))))
}

pub(crate) fn refined_key(rows: &[u8]) -> u64 {
    let n = rows.len();
    let mut cols = [0u8; CANON_LIMIT];
    for (i, &r) in rows.iter().enumerate() {
        for (j, col) in cols.iter_mut().enumerate().take(n) {
            if r >> j & 1 != 0 {
                *col |= 1 << i;
            }
        }
    }

    let mut inv = [0u64; CANON_LIMIT];
    for i in 0..n {
        inv[i] = ((rows[i].count_ones() as u64) << 4) | cols[i].count_ones() as u64;
    }
    // one refinement round: own invariant plus sorted neighbour invariants
    let mut refined = [0u64; CANON_LIMIT];
    for i in 0..n {
        let mut out_nb: Vec<u64> = (0..n).filter(|&j| j != i && rows[i] >> j & 1 != 0).map(|j| inv[j]).collect();
        let mut in_nb: Vec<u64> = (0..n).filter(|&j| j != i && cols[i] >> j & 1 != 0).map(|j| inv[j]).collect();
        out_nb.sort_unstable();
        in_nb.sort_unstable();
        let mut h = inv[i];
        for x in out_nb {
            h = mix(h, x);
        }
        h = mix(h, 0xff);
        for x in in_nb {
            h = mix(h, x);
        }
        refined[i] = h;
    }

    let mut verts: Vec<usize> = (0..n).collect();
    verts.sort_by_key(|&v| (refined[v], inv[v]));
    // cell boundaries
    let mut cells: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for a in 1..=n {
        if a == n || (refined[verts[a]], inv[verts[a]]) != (refined[verts[start]], inv[verts[start]]) {
            cells.push((start, a));
            start = a;
        }
    }

    let mut order = verts.clone();
    let mut best = u64::MAX;
    permute_cells(rows, &mut order, &cells, 0, &mut best);
    best
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2))
        .wrapping_mul(0x0100_0000_01b3)
}

fn permute_cells(rows: &[u8], order: &mut Vec<usize>, cells: &[(usize, usize)], cell: usize, best: &mut u64) {
    if cell == cells.len() {
        *best = (*best).min(encode(rows, order));
        return;
    }
    let (lo, hi) = cells[cell];
    if hi - lo == 1 {
        permute_cells(rows, order, cells, cell + 1, best);
        return;
    }
    permute_range(rows, order, cells, cell, lo, hi, best);
}

fn permute_range(
    rows: &[u8],
    order: &mut Vec<usize>,
    cells: &[(usize, usize)],
    cell: usize,
    pos: usize,
    hi: usize,
    best: &mut u64,
) {
    if pos + 1 >= hi {
        permute_cells(rows, order, cells, cell + 1, best);
        return;
    }
    for j in pos..hi {
        order.swap(pos, j);
        permute_range(rows, order, cells, cell, pos + 1, hi, best);
        order.swap(pos, j);
    }
}
