use std::path::PathBuf;

use thiserror::Error;

use crate::qubit::Party;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite argument passed to {0}")]
    NonFinite(&'static str),

    #[error("intermediate overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("coincident detectors: separation {0} must be strictly positive")]
    CoincidentDetectors(f64),

    #[error("subsystem {0:?} is not a factor of this matrix")]
    MissingParty(Party),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("arccos argument {0} outside [-1, 1] beyond rounding tolerance")]
    ArccosDomain(f64),

    #[error("outside the {case} regime: {reason}")]
    Regime { case: &'static str, reason: String },

    #[error("config: {0}")]
    Config(String),

    #[error("cell (gap = {gap}, length = {length}): {source}")]
    Cell {
        gap: f64,
        length: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}
