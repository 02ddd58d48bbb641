use thiserror::Error;

/// Errors produced by graph construction, bound evaluation and the
/// verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate edge (variable {var}, check {check})")]
    DuplicateEdge { var: usize, check: usize },

    #[error("duplicate edge ({0}, {1})")]
    DuplicateGraphEdge(usize, usize),

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("{kind} index {index} out of range (count {count})")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        count: usize,
    },

    #[error("empty variable subset")]
    EmptySubset,

    #[error("subset contains variable {0} more than once")]
    RepeatedSubsetEntry(usize),

    #[error("variable {var} has degree {degree} > gamma = {gamma}")]
    DegreeExceedsGamma {
        var: usize,
        degree: usize,
        gamma: usize,
    },

    #[error("check {0} is pendant; reduce the graph first")]
    PendantCheck(usize),

    #[error("error pattern length {got} does not match code length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{0}")]
    InvalidParameter(String),

    #[error("girth is infinite; the bound needs a cycle")]
    InfiniteGirth,

    #[error("graph is not left-regular")]
    NotLeftRegular,

    #[error("k = {k} exceeds the exhaustive limit of {limit}")]
    TooLarge { k: usize, limit: usize },

    #[error("no catalogued ({d}, {g})-cage; order lies in [{lower}, {upper}]")]
    UnknownCage {
        d: usize,
        g: usize,
        lower: u128,
        upper: u128,
    },

    #[error("gadget embedding failed: {0}")]
    EmbedFailed(String),

    #[error(
        "generator gave up after {attempts} attempts (girth {best} < {target}); try a larger n"
    )]
    GenerationFailed {
        attempts: usize,
        best: usize,
        target: usize,
    },

    #[error("{path}: {msg}")]
    Io { path: String, msg: String },

    #[error("alist line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
