use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("invalid split ratios {0:?}: must be positive and sum to 1")]
    InvalidRatios([f64; 3]),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{what} index {index} out of range (count {count})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        count: usize,
    },

    #[error("least-squares system is rank deficient: {distinct} distinct sample points for {required} coefficients")]
    RankDeficient { distinct: usize, required: usize },

    #[error("graph has {nodes} nodes, above the dense cap of {cap}; use a smaller graph")]
    DenseCapExceeded { nodes: usize, cap: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("propagated embeddings are stale; refresh the model before scoring")]
    StaleCache,

    #[error("non-finite loss at epoch {epoch} (last finite epoch: {last_finite:?})")]
    NonFiniteLoss { epoch: usize, last_finite: Option<usize> },

    #[error("invalid filter: {0}")]
    InvalidFilter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("bad file format in {path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 usage, 2 data, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidRatios(_) | Error::Config(_) | Error::InvalidFilter(_) => 1,
            Error::Parse { .. }
            | Error::EmptyDataset(_)
            | Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::DenseCapExceeded { .. }
            | Error::Format { .. }
            | Error::Io(_)
            | Error::Json(_) => 2,
            Error::RankDeficient { .. }
            | Error::NotSymmetric(_)
            | Error::NoConvergence(_)
            | Error::StaleCache
            | Error::NonFiniteLoss { .. }
            | Error::CheckFailed(_) => 3,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
