use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed npy header: {0}")]
    Header(String),

    #[error("unsupported dtype {0:?}: expected little-endian float ('<f4' or '<f8')")]
    Dtype(String),

    #[error("expected a {expected}-d array, found shape {found:?}")]
    Rank { expected: usize, found: Vec<usize> },

    #[error("npy payload holds {found} bytes, shape requires {expected}")]
    Payload { expected: usize, found: usize },

    #[error("dimension overflow for shape {0:?}")]
    Overflow(Vec<usize>),

    #[error("non-finite value at ({row},{col})")]
    NonFinite { row: usize, col: usize },

    #[error("{what}: expected {expected}, found {found}")]
    Shape {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("empty matrix: {0}")]
    Empty(&'static str),

    #[error("budget exceeds token count ({budget} > {tokens})")]
    BudgetExceedsTokens { budget: usize, tokens: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("seed strategy {strategy} requires {missing}")]
    MissingSeedInput {
        strategy: &'static str,
        missing: &'static str,
    },

    #[error("no text available: {0}")]
    TextAbsent(&'static str),

    #[error("invalid pattern {pattern:?}: {source}")]
    Pattern {
        pattern: String,
        #[source]
        source: regex::Error,
    },

    #[error("instance too large for exhaustive search: C({tokens},{budget}) exceeds {limit}")]
    InstanceTooLarge { tokens: usize, budget: usize, limit: u64 },

    #[error("invalid keep mask: {0}")]
    KeepMask(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
