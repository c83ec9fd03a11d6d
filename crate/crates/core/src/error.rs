use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular evaluation at {0}")]
    Singularity(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("not divisible: residual {residual:.3e}")]
    NotDivisible { residual: f64 },
    #[error("parse error at {pos} near '{token}': {msg}")]
    Parse { pos: usize, token: String, msg: String },
    #[error("unknown theorem id '{0}'")]
    Registry(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
