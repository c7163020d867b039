use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GossipError {
    #[error("don {don} is out of range for {n} dons")]
    DonOutOfRange { don: usize, n: usize },

    #[error("a call needs at least 2 participants, got {0}")]
    CallTooSmall(usize),

    #[error("don {0} appears twice in one call")]
    DuplicateParticipant(usize),

    #[error("number of dons must be in 1..={max}, got {n}")]
    BadDonCount { n: usize, max: usize },

    #[error("call size k={k} is invalid for {n} dons")]
    BadCallSize { k: usize, n: usize },

    #[error("call has {got} participants but the sequence declares k={expected}")]
    CallSizeMismatch { expected: usize, got: usize },

    #[error("time {t} is outside 1..={m}")]
    TimeOutOfRange { t: usize, m: usize },

    #[error("{0}")]
    OutOfRange(String),

    #[error("calls at times {t} and {next} share a participant")]
    NotDisjoint { t: usize, next: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, GossipError>;
