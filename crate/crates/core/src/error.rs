use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid IRI {iri:?}: {reason}")]
    InvalidIri { iri: String, reason: &'static str },

    #[error("invalid literal: {0}")]
    InvalidLiteral(String),

    #[error("N-Triples parse error at line {line}: {message}")]
    NTriples { line: usize, message: String },

    #[error("malformed wiki dump at byte {offset}: {message}")]
    Xml { offset: u64, message: String },

    #[error("invalid wiki id {0:?}")]
    InvalidWikiId(String),

    #[error("metadata error in {path}: {message}")]
    Metadata { path: PathBuf, message: String },

    #[error("count overflow: {0}")]
    Overflow(String),

    #[error("cannot allocate distance matrix for {items} items: {bytes} bytes required")]
    Capacity { items: usize, bytes: u128 },

    #[error("NaN distance between items {i} and {j}")]
    NanDistance { i: usize, j: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("external matcher failed: {0}")]
    ExternalMatcher(String),

    #[error("external matcher timed out after {0:?}")]
    MatcherTimeout(std::time::Duration),

    #[error("alignment parse error at line {line}: {message}")]
    AlignmentParse { line: usize, message: String },

    #[error("config error: missing required key `{0}`")]
    MissingConfigKey(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("missing artifact {path}; run the `{stage}` stage first")]
    MissingArtifact { path: PathBuf, stage: &'static str },

    #[error("outputs of the `{0}` stage are out of date; run it again first")]
    StaleArtifact(&'static str),

    #[error("merge task {task} failed: {source}")]
    Task {
        task: String,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<Path>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.as_ref().to_path_buf();
        move |source| Error::Io { path, source }
    }
}
