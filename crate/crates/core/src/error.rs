use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: {kind} id {id} out of range (instance has {bound})")]
    DanglingId {
        line: usize,
        kind: &'static str,
        id: usize,
        bound: usize,
    },

    #[error("line {line}: {kind} {owner} lists {entry} more than once")]
    DuplicateRank {
        line: usize,
        kind: &'static str,
        owner: usize,
        entry: usize,
    },

    #[error("applicant {0} has an empty preference list")]
    EmptyPreferenceList(usize),

    #[error("post {post} strict list does not match its neighbourhood: {detail}")]
    Symmetry { post: usize, detail: String },

    #[error("instance has no posts")]
    NoPosts,

    #[error("model violation: post {0} has a strict preference list; the solver needs single-tie posts")]
    ModelViolation(usize),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("vertex {vertex} has no edge to {partner}")]
    NotANeighbour { vertex: String, partner: usize },

    #[error("matching is not maximum: an augmenting path exists")]
    NotMaximum,

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("assignment does not satisfy clause {0}")]
    Unsatisfied(usize),

    #[error("matching violates the structure of popular matchings in reduced instances: {0}")]
    Structure(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),
}
