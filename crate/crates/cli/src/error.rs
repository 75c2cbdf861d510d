use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("expected a {expected} document, found a {found} document")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] fiedler_core::Error),
}
