use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed manifest, CSV layout, WAV header or JSON document.
    #[error("format error: {0}")]
    Format(String),

    /// A file is present but cannot be tied to a label or signal.
    #[error("ingestion error: {0}")]
    Ingestion(String),

    /// Non-finite or otherwise unusable sample values.
    #[error("data error: {0}")]
    Data(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Signal too short for the requested operation.
    #[error("length error: {0}")]
    Length(String),

    #[error("empty result: {0}")]
    EmptyResult(String),

    #[error("alignment error: {0}")]
    Alignment(String),

    /// Zero variance, single class, identical points and similar inputs for
    /// which a statistic is undefined.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("stratification error: {0}")]
    Stratification(String),

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("missing artifact {}", .0.display())]
    MissingArtifact(PathBuf),

    #[error("{metric}: {source}")]
    Metric {
        metric: &'static str,
        #[source]
        source: Box<Error>,
    },

    /// Failure inside one grid cell (downsampling configuration).
    #[error("config {cell}: {source}")]
    Cell {
        cell: String,
        #[source]
        source: Box<Error>,
    },

    /// Failure inside one workflow step.
    #[error("step {step}: {source}")]
    Step {
        step: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_metric(self, metric: &'static str) -> Self {
        Error::Metric {
            metric,
            source: Box::new(self),
        }
    }

    pub fn in_cell(self, cell: impl ToString) -> Self {
        Error::Cell {
            cell: cell.to_string(),
            source: Box::new(self),
        }
    }

    pub fn in_step(self, step: &'static str) -> Self {
        Error::Step {
            step,
            source: Box::new(self),
        }
    }

    /// The innermost error, with metric/cell/step wrappers peeled off.
    pub fn root(&self) -> &Error {
        match self {
            Error::Metric { source, .. } | Error::Cell { source, .. } | Error::Step { source, .. } => source.root(),
            other => other,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(format!("json: {e}"))
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(format!("csv: {e}"))
    }
}
