use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("sequence too short: need more than {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("contraction condition violated: coefficient sum {sum} >= 1")]
    Contraction { sum: f64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("training diverged at epoch {epoch}: {detail}")]
    Diverged { epoch: usize, detail: String },

    #[error("{} row {row}: {msg}", path.display())]
    Parse { path: PathBuf, row: usize, msg: String },

    #[error("config key `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("experiment aborted: {failed} of {total} replications failed")]
    TooManyFailures { failed: usize, total: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn spec(msg: impl Into<String>) -> Self {
        Error::InvalidSpec(msg.into())
    }
}
