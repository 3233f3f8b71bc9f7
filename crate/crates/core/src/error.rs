use std::path::PathBuf;

/// Error type shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An operation that needs at least one observation received none.
    #[error("empty dataset")]
    EmptyDataset,

    /// All records were removed by the configured filters.
    #[error("empty post-filter dataset")]
    EmptyPostFilter,

    /// A share of a zero total transmission has no meaning.
    #[error("undefined share: total transmission is zero")]
    UndefinedShare,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A value failed a domain check (negative count, malformed code, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// The run configuration is unusable; nothing was computed.
    #[error("configuration error: {0}")]
    Config(String),

    /// A bundled or user-supplied scheme file could not be parsed.
    #[error("scheme error in {path}: {message}")]
    Scheme { path: PathBuf, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("spec parse error: {0}")]
    Toml(String),
}

impl Error {
    /// Process exit code convention: 1 for data problems, 2 for configuration
    /// problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Scheme { .. } | Error::Toml(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
