use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed algebra or space tables; `field` names the offending entry.
    #[error("format error at {field}: {message}")]
    Format { field: String, message: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("syntax error at line {line}, column {column}: found {found}, expected one of: {}", expected.join(", "))]
    Syntax {
        line: usize,
        column: usize,
        found: String,
        expected: Vec<String>,
    },

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("invalid Nelson space: {0}")]
    InvalidSpace(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    /// The operation's hypotheses are not met by the input.
    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            message: message.into(),
        }
    }
}
