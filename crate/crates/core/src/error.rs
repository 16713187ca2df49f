use std::fmt;

use thiserror::Error;

/// A syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    /// Moves a single-line error onto `line`, shifting its column by `offset`.
    pub(crate) fn at_line(mut self, line: usize, offset: usize) -> Self {
        self.line = line;
        self.column += offset;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(ParseError),

    #[error("variable sets overlap: {0}")]
    Overlap(String),

    #[error("both sides of a CI triple must be nonempty")]
    EmptySide,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("variable index {index} outside universe of {n} variables")]
    OutOfUniverse { index: usize, n: usize },

    #[error("{what} supports at most {max} variables, got {n}")]
    CapExceeded { what: &'static str, n: usize, max: usize },

    #[error("graph contains a directed cycle")]
    Cycle,

    #[error("order is not a topological order of the graph")]
    NotTopological,

    #[error("antecedent {0} is not marginal")]
    NotMarginal(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("exact arithmetic unavailable: {0}")]
    InexactValue(String),

    #[error("atom mass at {0} is negative")]
    NegativeMass(String),

    #[error("the empty set is not an atom")]
    EmptyAtom,

    #[error("linear program has no feasible point (malformed program)")]
    Infeasible,

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}
