use thiserror::Error;

use crate::half::Half;

/// Every failure the library reports. Numeric checks that merely miss a
/// tolerance are not errors; they come back as reports with `pass == false`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("q = {0} must lie strictly between 0 and 1")]
    InvalidQ(f64),
    #[error("tolerance {0} must be strictly positive")]
    InvalidTolerance(f64),
    #[error("cutoff {cutoff} is not valid for the {family} family")]
    InvalidCutoff { family: &'static str, cutoff: Half },
    #[error("operation does not accept the {0} family")]
    UnsupportedFamily(&'static str),
    #[error("half-integer expected, got {0}")]
    NotHalfInteger(f64),
    #[error("cutoff {cutoff} is below the minimum {minimum} needed by the deepest checked word")]
    CutoffBelowMinimum { cutoff: Half, minimum: Half },
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("cannot parse {0:?} as a half-integer")]
    ParseHalf(String),
    #[error("empty interior: no column survives a word of depth {depth}")]
    EmptyInterior { depth: u32 },
    #[error("operators live on different spaces")]
    SpaceMismatch,
    #[error("unknown operator symbol {0:?}")]
    UnknownSymbol(String),
    #[error("operator is not invertible: {0}")]
    NotInvertible(&'static str),
    #[error("tail bound {bound:.3e} still exceeds budget {budget:.1e} after {levels} levels")]
    TailBudget { bound: f64, budget: f64, levels: u32 },
    #[error("residue fit certificate {certificate:.3e} above {threshold:.3e} at every N up to {max_n}")]
    Certificate { certificate: f64, threshold: f64, max_n: u32 },
    #[error("Re s = {0} is outside the half-plane of convergence")]
    ZetaDomain(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
