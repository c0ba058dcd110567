use thiserror::Error;

use crate::explain::ExplainError;
use crate::features::FeatureError;
use crate::ingest::IngestError;
use crate::model::ModelError;
use crate::preprocess::PreprocessError;
use crate::report::ReportError;
use crate::sentiment::LexiconError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Any failure surfaced by the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Preprocess(#[from] PreprocessError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Explain(#[from] ExplainError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Validation(String),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub(crate) fn json(path: impl AsRef<std::path::Path>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    ///
    /// 2 = validation error, 3 = fetch error, 4 = insufficient data, 1 = other.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Ingest(IngestError::Fetch { .. }) => 3,
            Error::Ingest(IngestError::Io { .. }) | Error::Feature(FeatureError::Io { .. }) => 1,
            Error::Ingest(_) => 2,
            Error::Lexicon(_) | Error::Config(_) | Error::Validation(_) | Error::Json { .. } => 2,
            Error::Feature(FeatureError::InsufficientData { .. }) => 4,
            Error::Preprocess(PreprocessError::InsufficientData { .. }) => 4,
            Error::Model(ModelError::InsufficientData { .. }) => 4,
            Error::Report(ReportError::Io { .. })
            | Error::Explain(ExplainError::Io { .. })
            | Error::Io { .. } => 1,
            Error::Feature(_) | Error::Preprocess(_) | Error::Model(_) | Error::Explain(_) => 2,
            Error::Report(_) => 2,
        }
    }
}
