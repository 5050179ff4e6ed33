use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("open term where a closed one is required ({0})")]
    OpenTerm(String),
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("process is not finite: {0}")]
    NotFinite(String),
    #[error("formula `{formula}` is not {kind} selective: models {first} and {second} differ")]
    Selectivity {
        formula: String,
        kind: &'static str,
        first: String,
        second: String,
    },
    #[error("machine state `{0}` clashes with a name reserved by the encoding")]
    NameClash(String),
    #[error("invalid machine description: {0}")]
    Machine(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}
