use serde::Serialize;

use crate::error::{GossipError, Result};
use crate::model::{final_state, find_temporal_path, hears_own_gossip, Call, CallSequence, DonId, DonSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationCertificate {
    /// Sequence on `n + 1` dons.
    pub original: CallSequence,
    pub eliminated_don: usize,
    /// Sequence on the other `n` dons, numbered in their original order.
    pub transformed: CallSequence,
    pub calls_saved: usize,
    /// Calls appended at the end because a rerouted call would have been
    /// a don calling herself.
    pub padding: usize,
    /// `(p, q)`: positions among the eliminated don's partners joined by the
    /// temporal path that saves the second call.
    pub pair: (usize, usize),
    /// 1-based times of the calls forming that path.
    pub path_times: Vec<usize>,
}

/// Removes a don who hears her own gossip, replacing her calls so that the
/// rest communicate at least as much with two fewer calls.
pub fn eliminate_don(seq: &CallSequence, x: DonId) -> Result<EliminationCertificate> {
    let total = seq.n();
    if x.index() >= total {
        return Err(GossipError::DonOutOfRange { don: x.number(), n: total });
    }
    if total < 3 {
        return Err(GossipError::Precondition(format!("need at least 3 dons, got {total}")));
    }
    if seq.calls().iter().any(|c| c.size() != 2) {
        return Err(GossipError::Precondition("every call must be between two dons".into()));
    }
    if !hears_own_gossip(seq, x) {
        return Err(GossipError::Precondition(format!("don {} never hears her own gossip", x.number())));
    }

    let calls = seq.calls();
    // times (0-based) and partners of x's calls
    let (times, partners): (Vec<usize>, Vec<DonId>) = calls
        .iter()
        .enumerate()
        .filter(|(_, c)| c.contains(x))
        .map(|(t, c)| (t, *c.members().iter().find(|&&d| d != x).expect("pair")))
        .unzip();
    let s = times.len();

    let avoid = DonSet(x.bit());
    let found = (0..s).find_map(|p| {
        (p + 1..s).find_map(|q| {
            find_temporal_path(seq, partners[p], partners[q], times[p] + 1, times[q] + 1, avoid).map(|path| (p, q, path))
        })
    });
    let Some((p, q, path)) = found else {
        return Err(GossipError::Construction(format!(
            "no temporal path avoiding don {} joins two of her partners between their calls",
            x.number()
        )));
    };

    let mut replaced: Vec<Option<(DonId, DonId)>> = calls
        .iter()
        .map(|c| {
            let m = c.members();
            Some((m[0], m[1]))
        })
        .collect();
    for r in 0..s {
        replaced[times[r]] = if r + 1 == s || r == p {
            None
        } else if p < r && r < q {
            Some((partners[r], path_end_before(&path.times, &path.dons, times[r] + 1)))
        } else {
            Some((partners[r], partners[r + 1]))
        };
    }

    let relabel = |d: DonId| if d.index() > x.index() { d.number() - 1 } else { d.number() };
    let mut new_calls = Vec::with_capacity(seq.len());
    for (u, v) in replaced.into_iter().flatten() {
        if u != v {
            new_calls.push(Call::pair(relabel(u), relabel(v))?);
        }
    }
    let target = seq.len() - 2;
    let padding = target.saturating_sub(new_calls.len());
    for _ in 0..padding {
        new_calls.push(Call::pair(1, 2)?);
    }
    let transformed = CallSequence::new(total - 1, new_calls)?;

    let cert = EliminationCertificate {
        original: seq.clone(),
        eliminated_don: x.number(),
        transformed,
        calls_saved: seq.len() - target,
        padding,
        pair: (p + 1, q + 1),
        path_times: path.times,
    };
    if !dominates(&cert) {
        return Err(GossipError::Construction(format!(
            "eliminating don {} from {seq} loses knowledge",
            x.number()
        )));
    }
    Ok(cert)
}

/// Holder of the path's news just before time `t` (1-based).
fn path_end_before(times: &[usize], dons: &[DonId], t: usize) -> DonId {
    let hops = times.iter().take_while(|&&tau| tau < t).count();
    dons[hops]
}

/// Whether every remaining don knows at least the remaining gossip she knew
/// originally.
pub fn dominates(cert: &EliminationCertificate) -> bool {
    let x = cert.eliminated_don - 1;
    let before = final_state(&cert.original);
    let after = final_state(&cert.transformed);
    let squeeze = |row: u64| (row & ((1u64 << x) - 1)) | ((row >> (x + 1)) << x);
    (0..cert.original.n())
        .filter(|&i| i != x)
        .all(|i| {
            let j = if i > x { i - 1 } else { i };
            squeeze(before.rows()[i]) & !after.rows()[j] == 0
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{planted_cycle, trial_rng};
    use rand::Rng;

    fn don(x: usize) -> DonId {
        DonId::new(x).unwrap()
    }

    #[test]
    fn three_dons() {
        let seq = CallSequence::from_pairs(3, &[(3, 1), (1, 2), (2, 3)]).unwrap();
        let cert = eliminate_don(&seq, don(3)).unwrap();
        assert_eq!(cert.transformed, CallSequence::from_pairs(2, &[(1, 2)]).unwrap());
        assert_eq!((cert.calls_saved, cert.padding, cert.pair), (2, 0, (1, 2)));
        assert_eq!(final_state(&cert.transformed).rows(), &[0b11, 0b11]);
    }

    #[test]
    fn four_dons() {
        let seq = CallSequence::from_pairs(4, &[(4, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let cert = eliminate_don(&seq, don(4)).unwrap();
        assert_eq!(cert.transformed, CallSequence::from_pairs(3, &[(1, 2), (2, 3)]).unwrap());
        assert_eq!(cert.path_times, vec![2, 3]);
        assert!(dominates(&cert));
    }

    #[test]
    fn middle_don_relabels() {
        // don 2 hears back through 1 and 3; dons above 2 shift down
        let seq = CallSequence::from_pairs(4, &[(2, 1), (1, 3), (3, 2), (3, 4)]).unwrap();
        let cert = eliminate_don(&seq, don(2)).unwrap();
        assert_eq!(cert.transformed.n(), 3);
        assert_eq!(cert.transformed.len(), 2);
        assert!(dominates(&cert));
    }

    #[test]
    fn repeated_partner_pads() {
        let seq = CallSequence::from_pairs(3, &[(3, 1), (3, 1), (1, 2)]).unwrap();
        let cert = eliminate_don(&seq, don(3)).unwrap();
        assert_eq!(cert.transformed.len(), 1);
        assert_eq!(cert.calls_saved, 2);
    }

    #[test]
    fn rejects_when_gossip_never_returns() {
        let seq = CallSequence::from_pairs(3, &[(3, 1), (1, 2)]).unwrap();
        assert!(matches!(eliminate_don(&seq, don(3)), Err(GossipError::Precondition(_))));
        assert!(matches!(eliminate_don(&seq, don(4)), Err(GossipError::DonOutOfRange { .. })));
    }

    #[test]
    fn planted_cycles() {
        let mut rng = trial_rng(5, 0);
        for _ in 0..500 {
            let dons = rng.gen_range(3..=7);
            let seq = planted_cycle(&mut rng, dons, 10);
            let cert = eliminate_don(&seq, don(dons)).unwrap_or_else(|e| panic!("{seq}: {e}"));
            assert_eq!(cert.transformed.len() + 2, seq.len());
            assert_eq!(cert.transformed.n() + 1, seq.n());
        }
    }

    #[test]
    fn every_self_hearing_don_of_random_sequences() {
        let mut rng = trial_rng(6, 0);
        for _ in 0..500 {
            let n = rng.gen_range(3..=6);
            let m = rng.gen_range(2..=10);
            let seq = crate::gen::random_sequence(&mut rng, n, m);
            for d in seq.dons() {
                if hears_own_gossip(&seq, d) {
                    eliminate_don(&seq, d).unwrap_or_else(|e| panic!("{seq}, don {}: {e}", d.number()));
                }
            }
        }
    }
}
