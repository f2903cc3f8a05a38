use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The source error carries the message; print the chain to see it.
    #[error("{path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}: no records")]
    NoRecords { origin: String },

    /// A row or object that could not be parsed or that breaks a field invariant.
    #[error("{origin}:{location}: field `{field}`: {message}")]
    Validation {
        origin: String,
        location: String,
        field: String,
        message: String,
    },

    #[error("{origin}: {message}")]
    Malformed { origin: String, message: String },

    #[error("profile is empty")]
    EmptyProfile,

    #[error("paper `{paper_id}` has n_authors = {n_authors}, must be at least 1")]
    InvalidAuthorCount { paper_id: String, n_authors: u32 },

    #[error("fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),

    #[error("prediction half-width must be positive, got {0}")]
    NonPositiveHalfwidth(f64),

    #[error("citation corpus is empty")]
    EmptyCorpus,

    #[error("citation corpus has no citations")]
    NoCitations,

    #[error("missing per-year citation data for paper `{0}`")]
    MissingYearlyData(String),

    #[error("citation corpus spans several publication years")]
    MixedPublicationYears,

    #[error("h = {0} is unreachable: no paper has that many citations")]
    UnreachableH(u64),

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad input data (as opposed to I/O failures).
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}
