use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing required column: {0}")]
    MissingColumn(&'static str),

    #[error("unbalanced braces at byte offset {offset}")]
    UnbalancedBraces { offset: usize },

    #[error("bibtex syntax error at byte offset {offset}: {reason}")]
    Syntax { offset: usize, reason: String },

    #[error("line {line}: {reason}")]
    Line { line: u64, reason: String },

    /// A score that has no value for the given network (too few nodes,
    /// no connected pair, no edges).
    #[error("metric undefined: {metric} ({reason})")]
    Undefined { metric: &'static str, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("nothing to compare: both titles are empty")]
    NothingToCompare,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn undefined(metric: &'static str, reason: impl Into<String>) -> Self {
        Error::Undefined {
            metric,
            reason: reason.into(),
        }
    }
}
