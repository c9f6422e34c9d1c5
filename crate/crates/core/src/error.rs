use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The brute-force oracle refuses positions above its configured cap.
    #[error("position {x} exceeds the oracle limit {limit}")]
    BoundExceeded { x: u64, limit: u64 },

    #[error("rule function violates 0 <= f(m) - f(m-1) <= 1 at m = {m} (f(m-1) = {prev}, f(m) = {cur})")]
    InvalidRule { m: u64, prev: u64, cur: u64 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// A scale the selected method cannot handle without materializing too much state.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}
