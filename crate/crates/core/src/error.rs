use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error: {message} at point {point:?}")]
    Domain { message: String, point: Vec<f64> },

    #[error("singular frame at point {point:?}: |det E| = {det:e}")]
    SingularFrame { point: Vec<f64>, det: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),

    #[error("hypothesis `{case}` violated: {entry} = {value:e}")]
    Hypothesis {
        case: String,
        entry: String,
        value: f64,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures that come from evaluating geometry rather than from
    /// bad input (domain errors, singular frames, degeneracy).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. } | Error::SingularFrame { .. } | Error::Degeneracy(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
