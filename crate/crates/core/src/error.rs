use thiserror::Error;

use crate::interval::Interval;
use crate::modality::Modality;

/// Errors raised by the formula and fragment front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown modality `{token}` at {line}:{column}")]
    UnknownModality { token: String, line: usize, column: usize },
}

/// Errors raised while building or loading interval models.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: degenerate interval [{x},{y}] (need x < y)")]
    Degenerate { line: usize, x: u64, y: u64 },
    #[error("line {line}: interval [{x},{y}] is outside the domain")]
    OutOfDomain { line: usize, x: u64, y: u64 },
    #[error("line {line}: duplicate valuation entry {letter} {interval}")]
    Duplicate { line: usize, letter: String, interval: Interval },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
}

/// Errors from the satisfiability engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("formula uses modality {0}, outside the B iB L iL fragment")]
    OutsideFragment(Modality),
}

/// Errors from the counter automaton front end and simulator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("guard violated: {0}")]
    Guard(String),
    #[error("unsupported encoding target {0}")]
    UnsupportedTarget(String),
}

/// Errors from the expressiveness and classification atlas.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtlasError {
    #[error("fragment `{0}` is outside the classified universe")]
    OutOfUniverse(String),
}
