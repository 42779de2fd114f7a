use num_complex::Complex64;
use thiserror::Error;

use crate::sl3::NuPair;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate interpolation nodes for s = {s}, b = {b}: denominator {denominator:e}")]
    DegenerateNode {
        s: Complex64,
        b: f64,
        denominator: f64,
    },

    #[error("quadrature did not converge to {tol:e} (last relative change {achieved:e})")]
    Quadrature { tol: f64, achieved: f64 },

    #[error("numeric degeneracy: {0}")]
    NumericDegeneracy(String),

    #[error("coset enumeration exceeds capacity: {0}")]
    Capacity(String),

    #[error("incomplete orbit: {} of 6 roots found", found.len())]
    IncompleteOrbit { found: Vec<NuPair> },

    #[error("node matrix is singular or ill-conditioned (condition number {condition:e})")]
    NodeChoice { condition: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("row T = {t}: {source}")]
    Row { t: String, source: Box<Error> },
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Dimension { .. }
            | Error::Config(_)
            | Error::Io(_)
            | Error::Csv(_) => 2,
            Error::DegenerateNode { .. }
            | Error::Quadrature { .. }
            | Error::NumericDegeneracy(_)
            | Error::Capacity(_)
            | Error::IncompleteOrbit { .. }
            | Error::NodeChoice { .. } => 3,
            Error::Row { source, .. } => source.exit_code(),
        }
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
