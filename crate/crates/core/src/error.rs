use thiserror::Error;

/// Errors raised by tree, subtree, hypergraph and experiment operations.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// A configured budget would be exceeded.
    #[error("budget exceeded: {what} (limit {limit}){}", level.map(|l| format!(" at level {l}")).unwrap_or_default())]
    Budget {
        what: String,
        limit: u128,
        level: Option<usize>,
    },

    /// A structural invariant did not hold on an input that claimed it.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// Malformed text input.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A pipeline stage failed; wraps the stage's own error.
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn budget(what: impl Into<String>, limit: u128, level: Option<usize>) -> Self {
        Error::Budget {
            what: what.into(),
            limit,
            level,
        }
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
