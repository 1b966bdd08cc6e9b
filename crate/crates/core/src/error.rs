use crate::hypergraph::VertexSet;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    /// Exact binomial arithmetic exceeded 64 bits.
    #[error("arithmetic overflow computing C({a},{b})")]
    Overflow { a: u64, b: u64 },

    #[error("rank {rank} out of range [0, {bound}) for ({n} choose {k})")]
    RankOutOfRange { rank: u64, bound: u64, n: u32, k: u32 },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("contract violation: {0}")]
    Contract(String),

    /// Rejection sampling for distinct candidate ranks exceeded its redraw cap.
    #[error("sampling error: could not draw {wanted} distinct ranks within {cap} redraws")]
    Sampling { wanted: u64, cap: u64 },

    /// Phase II exhausted its retry budget; carries the blocked leave edges
    /// of the final attempt.
    #[error("construction failure: {blocked_count} leave edges left without a representative after {attempts} attempts")]
    ConstructionFailure {
        attempts: u32,
        blocked_count: usize,
        blocked: Vec<VertexSet>,
        per_retry_blocked: Vec<usize>,
    },

    #[error("malformed design file at line {line}: {msg}")]
    Malformed { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
