use thiserror::Error;

/// Errors raised by constructors and operations.
///
/// Invariant violations carry the name of the type and the clause that failed,
/// so callers (and the CLI) can report exactly which condition was broken.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invariant violated: {type_name}.{clause}: {detail}")]
    Invariant {
        type_name: &'static str,
        clause: &'static str,
        detail: String,
    },
    #[error("{op}: boundary mismatch: {detail}")]
    Mismatch { op: &'static str, detail: String },
    #[error("{op}: input is not a discrete fibration: {detail}")]
    NotDiscreteFibration { op: &'static str, detail: String },
    #[error("no mediator exists")]
    NoMediator,
    #[error("{count} mediators exist where exactly one was expected")]
    MultipleMediators { count: u128 },
    #[error("size limit exceeded in {op}: {detail}")]
    TooLarge { op: &'static str, detail: String },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },
    #[error("unsupported document version {0}")]
    Version(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invariant(
        type_name: &'static str,
        clause: &'static str,
        detail: impl Into<String>,
    ) -> Self {
        Error::Invariant {
            type_name,
            clause,
            detail: detail.into(),
        }
    }

    pub(crate) fn mismatch(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Mismatch {
            op,
            detail: detail.into(),
        }
    }
}
