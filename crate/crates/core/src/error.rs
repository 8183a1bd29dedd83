use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {index} out of range for {what} (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid number {0:?}")]
    ParseNumber(String),
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),
    #[error("invalid fairness weights: {0}")]
    InvalidWeights(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("allocation is not fractionally Pareto-optimal")]
    NotFpo,
    #[error("no fair fPO allocation exists for the requested fairness notion")]
    NoFairAllocation,
    #[error(
        "degeneracy too high: D(v)={degeneracy} gives exponent {exponent} over budget {budget}"
    )]
    DegeneracyTooHigh {
        degeneracy: usize,
        exponent: u64,
        budget: u64,
    },
    #[error("search space of {size} supports exceeds the oracle budget {budget}")]
    BudgetExceeded { size: u128, budget: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_index(what: &'static str, index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { what, index, len })
    }
}
