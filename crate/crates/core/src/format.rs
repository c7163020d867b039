//! Plain-text sequence files.
//!
//! ```text
//! # optional comment lines
//! 5 2
//! 2 1
//! 3 1
//! ```
//!
//! The header is `n k`. Every following non-blank, non-comment line is one
//! call of exactly `k` distinct 1-based dons, in temporal order.

use std::fmt::Write as _;

use crate::error::{GossipError, Result};
use crate::model::{Call, CallSequence, MAX_DONS};

/// A parsed sequence file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceFile {
    pub k: usize,
    pub sequence: CallSequence,
}

fn parse_err(line: usize, msg: impl Into<String>) -> GossipError {
    GossipError::Parse { line, msg: msg.into() }
}

fn numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("`{tok}` is not a non-negative integer")))
        })
        .collect()
}

pub fn parse_sequence(text: &str) -> Result<SequenceFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut calls = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums = numbers(line_no, line)?;
        match header {
            None => {
                let [n, k] = nums[..] else {
                    return Err(parse_err(line_no, "header must be `n k`"));
                };
                if n == 0 || n > MAX_DONS {
                    return Err(parse_err(line_no, format!("n must be in 1..={MAX_DONS}, got {n}")));
                }
                if k < 2 || k > n {
                    return Err(parse_err(line_no, format!("k must be in 2..=n, got {k}")));
                }
                header = Some((n, k));
            }
            Some((n, k)) => {
                if nums.len() != k {
                    return Err(parse_err(line_no, format!("expected {k} dons, found {}", nums.len())));
                }
                if let Some(&bad) = nums.iter().find(|&&x| x == 0 || x > n) {
                    return Err(parse_err(line_no, format!("don {bad} is outside 1..={n}")));
                }
                let call = Call::new(&nums).map_err(|e| parse_err(line_no, e.to_string()))?;
                calls.push(call);
            }
        }
    }

    let (n, k) = header.ok_or_else(|| parse_err(1, "missing `n k` header"))?;
    Ok(SequenceFile { k, sequence: CallSequence::new(n, calls)? })
}

/// Renders `seq` in the sequence file format. Fails if the calls do not
/// all have the same size.
pub fn write_sequence(seq: &CallSequence) -> Result<String> {
    let k = match seq.uniform_size() {
        Some(k) => k,
        None if seq.is_empty() => 2,
        None => return Err(GossipError::Precondition("calls of mixed sizes cannot be written".into())),
    };
    let mut out = format!("{} {}\n", seq.n(), k);
    for call in seq.calls() {
        let line: Vec<String> = call.members().iter().map(|d| d.number().to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// A sequence file prefixed with the property it violates.
pub fn write_counterexample(seq: &CallSequence, property: &str) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "# violated: {property}");
    out.push_str(&write_sequence(seq)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_star_file() {
        let f = parse_sequence("5 2\n2 1\n3 1\n4 1\n5 1\n1 2\n").unwrap();
        assert_eq!(f.k, 2);
        assert_eq!(f.sequence.len(), 5);
        assert_eq!(f.sequence.calls()[0].sorted_numbers(), vec![1, 2]);
    }

    #[test]
    fn empty_call_list() {
        let f = parse_sequence("3 2\n").unwrap();
        assert!(f.sequence.is_empty());
        assert_eq!(f.sequence.n(), 3);
    }

    #[test]
    fn line_numbered_errors() {
        let e = parse_sequence("3 2\n1 2\n1 1\n").unwrap_err();
        assert_eq!(e, GossipError::Parse { line: 3, msg: "don 1 appears twice in one call".into() });

        let e = parse_sequence("3 2\n\n1 2 3\n").unwrap_err();
        assert!(matches!(e, GossipError::Parse { line: 3, .. }));

        let e = parse_sequence("3 2\n1 4\n").unwrap_err();
        assert!(matches!(e, GossipError::Parse { line: 2, .. }));

        let e = parse_sequence("3 2\n1 x\n").unwrap_err();
        assert!(matches!(e, GossipError::Parse { line: 2, .. }));

        let e = parse_sequence("3\n").unwrap_err();
        assert!(matches!(e, GossipError::Parse { line: 1, .. }));

        assert!(parse_sequence("").is_err());
        assert!(parse_sequence("3 4\n").is_err());
    }

    #[test]
    fn counterexample_dump_parses_back() {
        let seq = CallSequence::from_pairs(4, &[(1, 2), (3, 4)]).unwrap();
        let text = write_counterexample(&seq, "capacity").unwrap();
        assert!(text.starts_with("# violated: capacity\n"));
        assert_eq!(parse_sequence(&text).unwrap().sequence, seq);
    }
}
