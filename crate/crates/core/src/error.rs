use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a rational number: {0:?}")]
    BadRational(String),
    #[error("no solution: right-hand side is not in the image")]
    NoSolution,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("word length {needed} exceeds the truncation N = {max}")]
    Truncation { needed: usize, max: usize },
    #[error("expected a DGLA concentrated in degrees -1 and -2, found degree {0} populated")]
    NotTwoTerm(i32),
    #[error("invalid contraction: {0}")]
    InvalidContraction(String),
    #[error("bracket does not descend to the quotient: {0}")]
    NotAnIdeal(String),
    #[error("invalid DGLA: {0}")]
    InvalidDgla(String),
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
