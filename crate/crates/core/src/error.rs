use thiserror::Error;

use crate::model::{CellId, ModelError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("input fails validation: {0}")]
    Invalid(String),
    #[error("overlap: cell {placing} would land on ({}, {}) held by cell {occupant}", pos.0, pos.1)]
    Overlap { placing: CellId, occupant: CellId, pos: (i32, i32) },
    #[error("cell {0} is not placed in the net")]
    NotPlaced(CellId),
    #[error("cell {0} is already placed in the net")]
    AlreadyPlaced(CellId),
    #[error("removing {0:?} would disconnect the net")]
    NotRelocatable(Vec<CellId>),
    #[error("cut does not split the net into two components ({0} found)")]
    BadCut(usize),
    #[error("generator gave up after {0} attempts")]
    Exhausted(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invariant<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invariant(msg.into()))
}
