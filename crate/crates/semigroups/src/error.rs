use thiserror::Error;

/// Errors produced by construction and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("multiplication table is not associative: ({i}*{j})*{k} != {i}*({j}*{k})")]
    Associativity { i: usize, j: usize, k: usize },

    #[error("table entry {value} at ({row},{col}) is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },

    #[error("element index {index} is out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("labels must be pairwise distinct (duplicate: {0:?})")]
    DuplicateLabel(String),

    #[error("table must be square with one row per element")]
    MalformedTable,

    #[error("subset is not an ideal: {s}*{x} = {product} escapes")]
    NotAnIdeal { s: usize, x: usize, product: usize },

    #[error("transformation degrees differ: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("the given set does not generate the semigroup")]
    NotGenerating,

    #[error("subset is not closed under multiplication ({a}*{b} = {product} is outside)")]
    NotASubsemigroup { a: usize, b: usize, product: usize },

    #[error("assignment space {needed} exceeds evaluation budget {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },

    #[error("unbound variable {0:?}")]
    UnboundVariable(String),

    #[error("sandwich matrix has an all-zero {0}")]
    Regularity(&'static str),

    #[error("structure group is not a group: {0}")]
    NotAGroup(&'static str),

    #[error("operation requires a complete semiautomaton")]
    IncompleteAutomaton,

    #[error("letter {0:?} acts as the identity on the state set")]
    IdentityLetterPresent(String),

    #[error("subset is not a proper subsemigroup")]
    NotProper,

    #[error("amalgam precondition failed: {0}")]
    PreconditionFailed(&'static str),

    #[error("invalid zigzag certificate: {0}")]
    InvalidCertificate(String),

    #[error("empty alphabet")]
    EmptyAlphabet,

    #[error("empty state set")]
    EmptyStateSet,

    #[error("semigroup is not completely 0-simple")]
    NotCompletely0Simple,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
