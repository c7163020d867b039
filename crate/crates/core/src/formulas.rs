//! Closed-form values: the star schedule, its total knowledge, and the
//! classical minimum number of calls for complete gossip.

use serde::Serialize;

use crate::error::{GossipError, Result};
use crate::model::{Call, CallSequence, MAX_DONS};

fn triangular(x: usize) -> u32 {
    (x * (x + 1) / 2) as u32
}

/// Which closed form describes the optimum for a given `(n, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `m <= n - 1`
    Low,
    /// `n <= m <= 2n - 3`, below complete gossip
    High,
    /// enough calls for everyone to know everything
    ClassicalFull,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OptimumValue {
    pub n: usize,
    pub m: usize,
    pub value: u32,
    pub regime: Regime,
}

/// The first `m` calls of the star schedule: dons `2..=n` call don 1, then
/// don 1 calls dons `2..=n-1` back.
pub fn star_sequence(n: usize, m: usize) -> Result<CallSequence> {
    check_star_range(n, m)?;
    let calls = (1..=m)
        .map(|t| {
            if t < n {
                Call::pair(t + 1, 1)
            } else {
                Call::pair(1, t - n + 2)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    CallSequence::new(n, calls)
}

fn check_star_range(n: usize, m: usize) -> Result<()> {
    if !(2..=MAX_DONS).contains(&n) {
        return Err(GossipError::BadDonCount { n, max: MAX_DONS });
    }
    if m > 2 * n - 3 {
        return Err(GossipError::OutOfRange(format!(
            "the star schedule has 2n-3 = {} calls; m = {m} is beyond it",
            2 * n - 3
        )));
    }
    Ok(())
}

/// `n + (2 + 3 + ... + (m+1))`, valid for `m <= n - 1`.
pub fn star_value_low(n: usize, m: usize) -> u32 {
    n as u32 + triangular(m + 1) - 1
}

/// `n^2 - (1 + 2 + ... + (m'-1))` where `m' = 2n - 2 - m`.
pub fn star_value_high(n: usize, deficit: usize) -> u32 {
    (n * n) as u32 - triangular(deficit.saturating_sub(1))
}

/// Total knowledge after the first `m` star calls.
pub fn star_value(n: usize, m: usize) -> Result<u32> {
    check_star_range(n, m)?;
    Ok(if m < n { star_value_low(n, m) } else { star_value_high(n, 2 * n - 2 - m) })
}

/// The claimed maximum of N over all `m`-call sequences, for `0 <= m <= 2n-5`.
pub fn theorem_optimum(n: usize, m: usize) -> Result<u32> {
    if n < 4 {
        return Err(GossipError::OutOfRange(format!("the optimum theorem needs n >= 4, got n = {n}")));
    }
    if m + 5 > 2 * n {
        return Err(GossipError::OutOfRange(format!(
            "m = {m} is outside 0..=2n-5 = {}; the star schedule gives n^2-1 = {} at m = 2n-4, \
             but {} calls already suffice for complete gossip (n^2 = {})",
            2 * n - 5,
            n * n - 1,
            2 * n - 4,
            n * n
        )));
    }
    star_value(n, m)
}

/// Fewest pairwise calls after which every don knows every item.
pub fn classic_min_calls(n: usize) -> usize {
    match n {
        0 | 1 => 0,
        2 => 1,
        3 => 3,
        _ => 2 * n - 4,
    }
}

/// Best known value of N for `(n, m)` with pairwise calls.
pub fn known_optimum(n: usize, m: usize) -> Result<OptimumValue> {
    if !(2..=MAX_DONS).contains(&n) {
        return Err(GossipError::BadDonCount { n, max: MAX_DONS });
    }
    let (value, regime) = if m < n {
        (star_value_low(n, m), Regime::Low)
    } else if m + 3 <= 2 * n && (n <= 3 || m + 5 <= 2 * n) {
        (star_value_high(n, 2 * n - 2 - m), Regime::High)
    } else {
        ((n * n) as u32, Regime::ClassicalFull)
    };
    Ok(OptimumValue { n, m, value, regime })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_schedule_shape() {
        let seq = star_sequence(5, 7).unwrap();
        let pairs: Vec<Vec<usize>> = seq
            .calls()
            .iter()
            .map(|c| c.members().iter().map(|d| d.number()).collect())
            .collect();
        assert_eq!(pairs, vec![vec![2, 1], vec![3, 1], vec![4, 1], vec![5, 1], vec![1, 2], vec![1, 3], vec![1, 4]]);
        assert!(star_sequence(4, 0).unwrap().is_empty());
        assert!(star_sequence(4, 6).is_err());
    }

    #[test]
    fn star_values() {
        assert_eq!(star_value(5, 3).unwrap(), 14);
        assert_eq!(star_value(5, 5).unwrap(), 22);
        assert_eq!(star_value(4, 3).unwrap(), 13);
        assert_eq!(star_value_low(4, 3), 13);
        assert_eq!(star_value_high(4, 3), 13);
        assert_eq!(star_value(4, 5).unwrap(), 16);
        assert_eq!(star_value(4, 4).unwrap(), 15);
    }

    #[test]
    fn seam_and_monotone() {
        for n in 2..=30 {
            assert_eq!(star_value_low(n, n - 1), star_value_high(n, n - 1));
            let vals: Vec<u32> = (0..=2 * n - 3).map(|m| star_value(n, m).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[0] < w[1]), "n = {n}");
            assert_eq!(*vals.last().unwrap(), (n * n) as u32);
            assert_eq!(vals[0], n as u32);
        }
    }

    #[test]
    fn theorem_range() {
        assert_eq!(theorem_optimum(6, 7).unwrap(), 33);
        assert_eq!(theorem_optimum(4, 1).unwrap(), 6);
        assert_eq!(theorem_optimum(5, 5).unwrap(), 22);
        let err = theorem_optimum(4, 4).unwrap_err().to_string();
        assert!(err.contains("n^2-1 = 15"), "{err}");
        assert!(theorem_optimum(3, 0).is_err());
    }

    #[test]
    fn classic_minimum() {
        assert_eq!(classic_min_calls(1), 0);
        assert_eq!(classic_min_calls(2), 1);
        assert_eq!(classic_min_calls(3), 3);
        assert_eq!(classic_min_calls(4), 4);
        assert_eq!(classic_min_calls(10), 16);
    }

    #[test]
    fn regimes() {
        assert_eq!(known_optimum(5, 2).unwrap().regime, Regime::Low);
        assert_eq!(known_optimum(5, 5).unwrap(), OptimumValue { n: 5, m: 5, value: 22, regime: Regime::High });
        assert_eq!(known_optimum(5, 6).unwrap(), OptimumValue { n: 5, m: 6, value: 25, regime: Regime::ClassicalFull });
        assert_eq!(known_optimum(3, 2).unwrap().value, 8);
        assert_eq!(known_optimum(3, 3).unwrap().value, 9);
        assert_eq!(known_optimum(3, 7).unwrap().regime, Regime::ClassicalFull);
    }
}
