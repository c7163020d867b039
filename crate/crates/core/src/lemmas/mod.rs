//! Executable forms of the structural facts behind the optimum: checks that
//! must hold on every valid input, and transformations that must preserve
//! or improve what the dons learn.

mod elimination;
mod first_final;
mod tail;

pub use elimination::{dominates, eliminate_don, EliminationCertificate};
pub use first_final::{
    check_miscellaneous_isolation, first_final_call_analysis, CallClassification, FirstCallCheck, MiscIsolationCheck,
};
pub use tail::{is_tail_connected, normalize_tail, TailNormalization, TailOutcome};

use serde::Serialize;

use crate::error::{GossipError, Result};
use crate::model::{compute_stats, hears_own_gossip, nobody_hears_own, simulate, CallSequence, DonId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Holds,
    Violated,
    Inapplicable,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Holds
        } else {
            Outcome::Violated
        }
    }
}

/// `lhs <= rhs` when applicable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub outcome: Outcome,
}

/// Exchanges the calls at times `t` and `t + 1`, which must be disjoint.
pub fn swap_adjacent_disjoint(seq: &CallSequence, t: usize) -> Result<CallSequence> {
    let m = seq.len();
    if t == 0 || t >= m {
        return Err(GossipError::TimeOutOfRange { t, m: m.saturating_sub(1) });
    }
    let calls = seq.calls();
    if !calls[t - 1].is_disjoint(&calls[t]) {
        return Err(GossipError::NotDisjoint { t, next: t + 1 });
    }
    let mut swapped = calls.to_vec();
    swapped.swap(t - 1, t);
    CallSequence::new(seq.n(), swapped)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CapacityViolation {
    pub t: usize,
    pub joint: u32,
    pub bound: u32,
}

/// Joint knowledge of each call's participants right after it.
pub fn joint_knowledge_profile(seq: &CallSequence) -> Vec<u32> {
    let traj = simulate(seq);
    seq.calls()
        .iter()
        .enumerate()
        .map(|(t, c)| traj[t + 1].joint_knowledge(c).count_ones())
        .collect()
}

/// After call `t` (with `t < n`) its participants jointly know at most
/// `1 + sum of (|e_s| - 1)` items over `s <= t`, which is `t + 1` for pairs.
/// Returns the calls that break this.
pub fn check_capacity(seq: &CallSequence) -> Vec<CapacityViolation> {
    let mut bound = 1u32;
    let mut out = Vec::new();
    for (idx, (call, joint)) in seq.calls().iter().zip(joint_knowledge_profile(seq)).enumerate() {
        let t = idx + 1;
        bound += call.size() as u32 - 1;
        if t < seq.n() && joint > bound {
            out.push(CapacityViolation { t, joint, bound });
        }
    }
    out
}

/// `a_i + b_i <= m + 2 + d_i - c_i`, applicable when don `i` never hears
/// her own gossip and every call is a pair.
pub fn check_counting_inequality(seq: &CallSequence, i: DonId) -> BoundCheck {
    let stats = compute_stats(seq);
    let ix = i.index();
    let lhs = (stats.a[ix] + stats.b[ix]) as i64;
    let rhs = seq.len() as i64 + 2 + stats.d[ix] as i64 - stats.c[ix] as i64;
    let applicable = ix < seq.n() && pairwise(seq) && !hears_own_gossip(seq, i);
    BoundCheck { lhs, rhs, outcome: if applicable { Outcome::from_bool(lhs <= rhs) } else { Outcome::Inapplicable } }
}

/// `2N <= n(m + 2) + 2m`, applicable when nobody hears her own gossip.
pub fn check_summed_bound(seq: &CallSequence) -> BoundCheck {
    let n = seq.n() as i64;
    let m = seq.len() as i64;
    let lhs = 2 * crate::model::final_state(seq).total() as i64;
    let rhs = n * (m + 2) + 2 * m;
    let applicable = pairwise(seq) && nobody_hears_own(seq);
    BoundCheck { lhs, rhs, outcome: if applicable { Outcome::from_bool(lhs <= rhs) } else { Outcome::Inapplicable } }
}

fn pairwise(seq: &CallSequence) -> bool {
    seq.calls().iter().all(|c| c.size() == 2)
}

/// Both sides of the factorisation `-m'^2 + (n+3)m' - 4(n+1) = (m'-4)(n+1-m')`
/// exactly as written, evaluated at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub n: i64,
    pub m_prime: i64,
    pub expanded: i64,
    pub factored: i64,
    pub equal: bool,
    pub expanded_nonnegative: bool,
    pub factored_nonnegative: bool,
}

pub fn check_identity(n: i64, m_prime: i64) -> IdentityCheck {
    let expanded = -m_prime * m_prime + (n + 3) * m_prime - 4 * (n + 1);
    let factored = (m_prime - 4) * (n + 1 - m_prime);
    IdentityCheck {
        n,
        m_prime,
        expanded,
        factored,
        equal: expanded == factored,
        expanded_nonnegative: expanded >= 0,
        factored_nonnegative: factored >= 0,
    }
}

/// Gap between the target `2(n^2 - (1 + ... + (m'-1)))` and the summed bound
/// `n(m+2) + 2m` at `m = 2n - 2 - m'`, computed directly.
pub fn summed_bound_slack(n: i64, m_prime: i64) -> i64 {
    let m = 2 * n - 2 - m_prime;
    2 * n * n - m_prime * (m_prime - 1) - (n * (m + 2) + 2 * m)
}

/// Factored form of [`summed_bound_slack`]: `(m' - 4)(n - 1 - m')`.
pub fn summed_bound_slack_factored(n: i64, m_prime: i64) -> i64 {
    (m_prime - 4) * (n - 1 - m_prime)
}
