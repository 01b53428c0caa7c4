use std::fmt;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A malformed automaton description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number, or 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("automaton is not normalized: the initial state must loop on digit 0")]
    NotNormalized,

    #[error("automaton is not a set: state {state} has output {output}")]
    NotASet { state: usize, output: String },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("infeasible instance: {needed} candidate words exceed the cap of {cap}")]
    Infeasible { needed: String, cap: u64 },

    #[error("inadmissible density target: {0}")]
    Inadmissible(String),

    #[error("peripheral eigenvalue not semisimple: {0}")]
    NotSemisimple(String),

    #[error("spectral assertion failed: {0}")]
    Spectral(String),

    #[error("cost guard: {0}")]
    CostGuard(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
