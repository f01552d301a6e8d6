use thiserror::Error;

/// Failures that stop a command. All of them are input errors (exit 2);
/// failed assertions are reported through the suite report instead.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}:{line}:{column}: {message}")]
    Parse {
        file: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("io: {0}")]
    Io(String),
    #[error("unknown lemma tag {0:?}; known tags: {1}")]
    UnknownTag(String, String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] qctree::Error),
}

impl CliError {
    pub const EXIT_CODE: i32 = 2;
}
