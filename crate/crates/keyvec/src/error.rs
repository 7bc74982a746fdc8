use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed content in a line-oriented file; `line` is 1-based.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("duplicate document id \"{0}\"")]
    DuplicateId(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("vocabulary mismatch between model and co-occurrence matrix")]
    VocabMismatch,

    #[error("training diverged at pass {pass}: loss is not finite (try a lower learning rate)")]
    TrainingDiverged { pass: usize },

    #[error("no candidate unigrams in summary")]
    NoCandidateUnigrams,

    #[error("reference vector has zero norm")]
    ZeroReference,

    #[error("document \"{id}\": variant {variant} requires fulltext")]
    MissingFulltext { id: String, variant: String },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("empty gold keyphrase set")]
    EmptyGold,

    #[error("document \"{id}\": {msg}")]
    Document { id: String, msg: String },

    #[error("{0}")]
    Eval(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
