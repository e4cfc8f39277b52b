use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("name is empty after normalization: {0:?}")]
    EmptyName(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("training data has only {0} pairs; both classes are required")]
    SingleClass(&'static str),
    #[error("optimizer did not converge after {iterations} iterations (gradient norm {gradient_norm:.3e})")]
    NonConvergence {
        iterations: usize,
        gradient_norm: f64,
    },
    #[error("threshold grid is empty")]
    EmptyGrid,
    #[error("tag map is empty")]
    EmptyTagMap,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
