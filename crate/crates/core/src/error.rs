use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: a state needs at least one basis element")]
    InvalidDimension(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("norm drift {drift:.3e} exceeds tolerance {tolerance:.1e}")]
    NormDrift { drift: f64, tolerance: f64 },

    #[error("marked set is empty")]
    EmptyMarkedSet,

    #[error("marked count {marked} invalid for database of size {size}")]
    InvalidMarkedCount { marked: usize, size: usize },

    #[error("target is unreachable: overlap between start and target is zero")]
    NoAmplification,

    #[error("{0} is not a power of four")]
    NotPowerOfFour(usize),

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("lattice of side {side} in {dim} dimensions overflows the index space")]
    SizeOverflow { dim: usize, side: usize },

    #[error("database size {size} exceeds the cap {cap} (raise it with --max-n or QSEARCH_MAX_N)")]
    InfeasibleSize { size: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate run: peak probability is zero")]
    DegenerateRun,

    #[error("light-cone violation at query {query}: probability {probability:.6e} exceeds reachable bound {bound:.6e}")]
    LightConeViolation { query: usize, probability: f64, bound: f64 },

    #[error("fit is underdetermined: {distinct} distinct abscissae, need at least 2")]
    Underdetermined { distinct: usize },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// True for failures that indicate a numerical bug rather than bad input.
    pub fn is_consistency_failure(&self) -> bool {
        matches!(self, Error::NormDrift { .. } | Error::LightConeViolation { .. })
    }
}
