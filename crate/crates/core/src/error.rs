use thiserror::Error;

/// Errors raised by the walkmin core.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown character {ch:?} at position {pos}")]
    UnknownCharacter { pos: usize, ch: char },

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("walks do not concatenate: first ends at {left:?}, second starts at {right:?}")]
    EndpointMismatch { left: String, right: String },

    #[error("no color assigned to label {0:?}")]
    MissingColor(String),

    #[error("walk is not valid in the graph: {0}")]
    InvalidWalk(String),

    #[error("malformed DIMACS input on line {line}: {message}")]
    Dimacs { line: usize, message: String },

    #[error("clause {clause} is tautological (contains x{var} and its negation)")]
    TautologicalClause { clause: usize, var: usize },

    #[error("clause {clause} has {found} distinct variables, expected 3")]
    ClauseArity { clause: usize, found: usize },

    #[error("variable index {var} out of range 1..={k}")]
    VariableOutOfRange { var: usize, k: usize },

    #[error("brute-force SAT oracle refuses {k} variables (limit {limit})")]
    TooManyVariables { k: usize, limit: usize },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("walk does not match R1 of the reduction instance")]
    NotAnR1Match,

    #[error("operation requires the {expected} variant, got {found}")]
    WrongVariant { expected: String, found: String },

    #[error("invalid document: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
