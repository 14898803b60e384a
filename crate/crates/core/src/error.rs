use thiserror::Error;

/// Errors raised by word, graph, covariance and measurement operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("letter {letter:?} occurs {count} times; every letter must occur exactly twice")]
    NotDoubleOccurrence { letter: String, count: usize },

    #[error("the word is empty")]
    EmptyWord,

    #[error("letter {letter:?} repeats at position {position}, which is a self-loop in the multigraph")]
    SelfLoop { letter: String, position: usize },

    #[error("the word splits into letter-disjoint cyclic factors (its alternance graph is disconnected)")]
    Disconnected,

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("vertex {0:?} appears more than once")]
    DuplicateVertex(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("search exceeded its budget of {budget} states")]
    BudgetExceeded { budget: usize },

    #[error("{what}: size {size} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not skew-symmetric (deviation {deviation:e})")]
    NotSkew { deviation: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("Majorana support has odd size {0}")]
    OddSupport(usize),

    #[error("index {0} repeated in a Majorana support")]
    RepeatedIndex(usize),

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("probability {0:e} is negative beyond tolerance")]
    NegativeProbability(f64),

    #[error("product state is not pure: Bloch vector {index} has norm {norm}")]
    MixedProductState { index: usize, norm: f64 },

    #[error("measurement direction for {qubit:?} is not a unit vector (norm {norm})")]
    InvalidDirection { qubit: String, norm: f64 },

    #[error("outcome must be +1 or -1, got {0}")]
    InvalidOutcome(i64),

    #[error("qubit {0:?} is not a letter of the word")]
    UnknownQubit(String),

    #[error("adaptive basis table has no entry for prefix {0:?}")]
    UnreachablePrefix(String),

    #[error("prefix has zero probability")]
    ZeroPrefixProbability,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
