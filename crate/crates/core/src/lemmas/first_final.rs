use serde::Serialize;

use super::Outcome;
use crate::model::{compute_stats, final_state, hears_own_gossip, CallSequence, DonId, DonSet};

/// One instance of the first-call argument: `don`'s first call is with
/// `partner`, whose own first call came earlier with `other`. Then `other`
/// never learns `don`'s gossip unless `other` hears her own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FirstCallCheck {
    pub don: usize,
    pub partner: usize,
    pub other: usize,
    pub outcome: Outcome,
}

/// Calls are listed by 1-based time, dons by 1-based number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CallClassification {
    pub mutual_first: Vec<usize>,
    pub mutual_final: Vec<usize>,
    pub miscellaneous: Vec<usize>,
    pub non_mutual_first_dons: Vec<usize>,
    pub non_mutual_final_dons: Vec<usize>,
    /// Dons that never call.
    pub silent_dons: Vec<usize>,
    pub first_call_checks: Vec<FirstCallCheck>,
}

pub fn first_final_call_analysis(seq: &CallSequence) -> CallClassification {
    let n = seq.n();
    let calls = seq.calls();
    let mut first = vec![None; n];
    let mut last = vec![None; n];
    for (t, c) in calls.iter().enumerate() {
        for d in c.members() {
            first[d.index()].get_or_insert(t);
            last[d.index()] = Some(t);
        }
    }

    let is_mutual = |marks: &[Option<usize>], t: usize| calls[t].members().iter().all(|d| marks[d.index()] == Some(t));
    let mutual_first: Vec<usize> = (0..calls.len()).filter(|&t| is_mutual(&first, t)).collect();
    let mutual_final: Vec<usize> = (0..calls.len()).filter(|&t| is_mutual(&last, t)).collect();
    let miscellaneous = (0..calls.len())
        .filter(|t| !mutual_first.contains(t) && !mutual_final.contains(t))
        .map(|t| t + 1)
        .collect();

    let silent_dons = seq.dons().filter(|d| first[d.index()].is_none()).map(DonId::number).collect();
    let non_mutual = |marks: &[Option<usize>], mutual: &[usize]| -> Vec<usize> {
        seq.dons()
            .filter(|d| marks[d.index()].is_some_and(|t| !mutual.contains(&t)))
            .map(DonId::number)
            .collect()
    };
    let non_mutual_first_dons = non_mutual(&first, &mutual_first);
    let non_mutual_final_dons = non_mutual(&last, &mutual_final);

    let mut first_call_checks = Vec::new();
    let pairwise = calls.iter().all(|c| c.size() == 2);
    let end = final_state(seq);
    for v in seq.dons() {
        let Some(tv) = first[v.index()] else { continue };
        for &w in calls[tv].members() {
            if w == v {
                continue;
            }
            let tw = first[w.index()].expect("w calls at tv");
            if tw == tv {
                continue;
            }
            for &x in calls[tw].members() {
                if x == w {
                    continue;
                }
                let outcome = if !pairwise || hears_own_gossip(seq, x) {
                    Outcome::Inapplicable
                } else if end.knows(x, v) {
                    Outcome::Violated
                } else {
                    Outcome::Holds
                };
                first_call_checks.push(FirstCallCheck { don: v.number(), partner: w.number(), other: x.number(), outcome });
            }
        }
    }

    CallClassification {
        mutual_first: mutual_first.iter().map(|t| t + 1).collect(),
        mutual_final: mutual_final.iter().map(|t| t + 1).collect(),
        miscellaneous,
        non_mutual_first_dons,
        non_mutual_final_dons,
        silent_dons,
        first_call_checks,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MiscIsolationCheck {
    pub hypothesis_met: bool,
    pub reason: Option<String>,
    /// Connected components of the graph of miscellaneous calls on all dons.
    pub components: usize,
    /// Dons with `c_i = 0`.
    pub violations: Vec<usize>,
    pub outcome: Outcome,
}

fn components(n: usize, edges: &[u64]) -> (usize, DonSet) {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut covered = 0u64;
    for &e in edges {
        covered |= e;
        let members: Vec<usize> = DonSet(e).iter().map(|d| d.index()).collect();
        for w in members.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let count = (0..n).filter(|&x| find(&mut parent, x) == x).count();
    let all = crate::model::full_mask(n);
    (count, DonSet(all & !covered))
}

/// With `(n-1)/2` mutual first calls, `(n-1)/2` mutual final calls and
/// `n - 4` miscellaneous calls touching every don, every don has at least
/// one call that is irrelevant to her (`c_i >= 1`).
pub fn check_miscellaneous_isolation(seq: &CallSequence, classes: &CallClassification) -> MiscIsolationCheck {
    let n = seq.n();
    let misc_edges: Vec<u64> = classes.miscellaneous.iter().map(|&t| seq.calls()[t - 1].mask()).collect();
    let (components, isolated) = components(n, &misc_edges);

    let reason = if n < 5 || n.is_multiple_of(2) {
        Some(format!("n = {n} is not odd and at least 5"))
    } else if classes.mutual_first.len() != (n - 1) / 2 || classes.mutual_final.len() != (n - 1) / 2 {
        Some(format!(
            "{} mutual first and {} mutual final calls, expected {} each",
            classes.mutual_first.len(),
            classes.mutual_final.len(),
            (n - 1) / 2
        ))
    } else if misc_edges.len() != n - 4 {
        Some(format!("{} miscellaneous calls, expected {}", misc_edges.len(), n - 4))
    } else if !isolated.is_empty() {
        Some(format!("miscellaneous calls miss dons {:?}", isolated.numbers()))
    } else {
        None
    };

    if let Some(reason) = reason {
        return MiscIsolationCheck {
            hypothesis_met: false,
            reason: Some(reason),
            components,
            violations: vec![],
            outcome: Outcome::Inapplicable,
        };
    }
    let stats = compute_stats(seq);
    let violations: Vec<usize> = seq.dons().filter(|d| stats.c[d.index()] == 0).map(DonId::number).collect();
    MiscIsolationCheck {
        hypothesis_met: true,
        reason: None,
        components,
        outcome: Outcome::from_bool(violations.is_empty()),
        violations,
    }
}
