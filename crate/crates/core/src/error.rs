use std::path::PathBuf;

use thiserror::Error;

use crate::root_datum::DatumError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error("cannot parse element `{0}`")]
    Parse(String),
    #[error("invalid parahoric type: {0}")]
    Parahoric(String),
    #[error("cocharacter {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("{0} is not a minimal left coset representative")]
    NotMinimal(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("defect unavailable for {0}")]
    DefectUnavailable(String),
    #[error("predicted dimension {0} is not an integer")]
    NonIntegral(String),
    /// A check that the theory guarantees failed; this is a bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
