use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("resource id must not be blank")]
    EmptyId,

    #[error("tag label must not be blank")]
    EmptyTag,

    #[error("duplicate resource `{0}`")]
    DuplicateResource(String),

    #[error("unknown resource `{0}`")]
    UnknownResource(String),

    #[error("scope must contain at least one resource")]
    EmptyScope,

    #[error("collection has no resources")]
    EmptyCollection,

    #[error("tag `{0}` does not narrow the current selection")]
    InfeasibleTag(String),

    #[error("already at the initial state")]
    AtRoot,

    #[error("session opened at revision {opened} but collection is at {current}")]
    StaleSession { opened: u64, current: u64 },

    #[error("unknown category node {0}")]
    UnknownNode(usize),

    #[error("moving category {node} under {new_parent} would create a cycle")]
    CycleError { node: usize, new_parent: usize },

    #[error("tag `{0}` is assigned to more than one category")]
    DuplicateCategoryTag(String),

    #[error("navigation automaton exceeds the state limit of {limit}")]
    StateLimitExceeded { limit: usize },

    #[error("category tag `{0}` does not annotate any resource")]
    UnknownCategoryTag(String),

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid workload: {0}")]
    InvalidSpec(String),

    #[error("engine failure: {0}")]
    EngineFailure(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        if err.is_io() {
            return Error::Io(err.into());
        }
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
