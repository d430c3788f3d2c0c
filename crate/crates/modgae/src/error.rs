//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("ingestion error: {0}")]
    Ingestion(String),

    #[error("value {value} out of range at {path}:{line}: expected {expected}")]
    Range {
        path: String,
        line: usize,
        value: f64,
        expected: String,
    },

    #[error("edge split error: {0}")]
    Split(String),

    #[error("modularity is undefined: {0}")]
    UndefinedModularity(String),

    #[error("invalid parameter {name}: {msg}")]
    Parameter { name: String, msg: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("numerical error at iteration {iteration}: {msg}")]
    Numerical { iteration: usize, msg: String },

    #[error("degenerate clusters: {0}")]
    DegenerateClusters(String),

    #[error("metric error: {0}")]
    Metric(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("model file error: {0}")]
    ModelFormat(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn parameter(name: &str, msg: impl Into<String>) -> Self {
        Error::Parameter {
            name: name.to_string(),
            msg: msg.into(),
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
