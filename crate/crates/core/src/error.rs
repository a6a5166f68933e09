use thiserror::Error;

use crate::lorenz_map::ValidationReport;

/// Errors raised by the analysis pipeline.
///
/// Every variant is a definite failure: no operation in this crate falls back
/// to a heuristic answer when it cannot certify one.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("precision exhausted after {bits} bits without separating the operands")]
    PrecisionExhausted { bits: u32 },

    #[error("evaluation at the critical point requires a side (c- or c+)")]
    SideRequired,

    #[error("point lies outside the map domain")]
    OutOfDomain,

    #[error("no hit within {cap} iterations")]
    CapExceeded { cap: usize },

    #[error("interval does not straddle the critical point")]
    IntervalDoesNotStraddleC,

    #[error("interval is empty or malformed")]
    EmptyInterval,

    #[error("backward chain point {index} has {count} preimages before entering [f(a), f(b)]")]
    AmbiguousPreimage { index: usize, count: usize },

    #[error("found {orbits} distinct orbits of minimal period {period}")]
    UniquenessViolated { period: usize, orbits: usize },

    #[error("no periodic orbit of period {period} found")]
    OrbitNotFound { period: usize },

    #[error("cylinder budget of {budget} branches exceeded")]
    BranchBudgetExceeded { budget: usize },

    #[error("composition is discontinuous: step {step} crosses the critical point")]
    Discontinuous { step: usize },

    #[error("invalid Lorenz map: {0}")]
    InvalidMap(ValidationReport),

    #[error("inconsistent analysis state: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
