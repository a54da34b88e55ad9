use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vote {vote} has length {found}, expected {expected}")]
    VoteLengthMismatch {
        vote: usize,
        expected: usize,
        found: usize,
    },

    #[error("vote {vote} is not a permutation of the candidates")]
    NotAPermutation { vote: usize },

    #[error("an election needs at least one candidate and one voter")]
    EmptyElection,

    #[error("size mismatch in {what}: {left} vs {right}")]
    SizeMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("cost entry at ({row}, {col}) is outside [0, 2^62]")]
    InvalidCost { row: usize, col: usize },

    #[error("assignment total does not fit in 63 bits")]
    Overflow,

    #[error("{what} = {value} exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("budget k = {k} is too large for exhaustive swap search (cap {cap})")]
    BudgetTooLargeForSearch { k: u64, cap: u64 },

    #[error("domain over {m} candidates is too large to enumerate (limit 20)")]
    DomainTooLarge { m: usize },

    #[error("domain is empty")]
    EmptyDomain,

    #[error("{operation} is not available for the {metric} metric")]
    UnsupportedMetric {
        metric: &'static str,
        operation: &'static str,
    },

    #[error("elections in a batch must share candidate and voter counts")]
    HeterogeneousSizes,

    #[error("need at least {needed} elections, got {got}")]
    TooFewElections { needed: usize, got: usize },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("line {line}: order does not rank every alternative")]
    IncompleteOrder { line: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported input: {0}")]
    UnsupportedFormat(String),
}

impl Error {
    pub(crate) fn size(what: &'static str, left: usize, right: usize) -> Self {
        Error::SizeMismatch { what, left, right }
    }

    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            line,
            reason: reason.into(),
        }
    }
}
