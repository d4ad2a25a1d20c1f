use thiserror::Error;

/// Errors raised by capacity evaluation, process models, bounds, and
/// experiment orchestration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("infinite capacity: {0}")]
    InfiniteCapacity(String),

    #[error("unsolvable: {0}")]
    Unsolvable(String),

    #[error("index out of range: {index} (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("no positive root: {0}")]
    NoRoot(String),

    #[error("degenerate increment: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(line: usize, msg: impl Into<String>) -> Self {
        Error::Config {
            line,
            message: msg.into(),
        }
    }

    /// Wraps the error with a description of what was being attempted.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for configuration problems (as opposed to numerical ones).
    pub fn is_config(&self) -> bool {
        matches!(self.root(), Error::Config { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
