use thiserror::Error;

/// Errors raised by the toolkit. Variants map onto the CLI exit codes:
/// parse and input problems are usage errors, cap overruns get their own code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("determinant side {side} exceeds the cap of {cap}")]
    DeterminantTooLarge { side: usize, cap: usize },

    #[error("term order is not total: a weight order needs a tie-break")]
    PartialOrder,

    #[error("term order is not a well-ordering: {0}")]
    NonGlobalOrder(String),

    #[error("cap exceeded: {what} (degree {degree})")]
    CapExceeded { what: String, degree: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse_at(text: &str, offset: usize, message: impl Into<String>) -> Self {
        let prefix = &text[..offset.min(text.len())];
        let line = prefix.matches('\n').count() + 1;
        let column = prefix.rfind('\n').map_or(prefix.len(), |p| prefix.len() - p - 1) + 1;
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
