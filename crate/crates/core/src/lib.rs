//! Exact tools for the greedy gossiping problem: simulate knowledge spread
//! over call sequences, compute the star schedule and its value, search
//! exhaustively for the maximum total knowledge, and check the structural
//! lemmas behind the optimum on concrete inputs.

pub mod canon;
pub mod conjecture;
pub mod error;
pub mod format;
pub mod formulas;
pub mod gen;
pub mod lemmas;
pub mod model;
mod packed;
pub mod search;
pub mod suite;

pub use error::{GossipError, Result};
pub use formulas::{classic_min_calls, star_sequence, star_value, theorem_optimum};
pub use model::{
    compute_stats, final_state, hears_own_gossip, reverse, simulate, total_knowledge, Call, CallSequence, DonId,
    DonSet, GossipStats, KnowledgeState,
};
pub use packed::{call_gain_cap, SEARCH_LIMIT};
pub use search::{max_total_knowledge, min_calls_full, verify_theorem, SearchConfig, SearchReport, SearchStatus};
