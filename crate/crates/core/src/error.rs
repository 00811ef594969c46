use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FischerError {
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("coefficient does not lie in the spinor ideal")]
    NotInIdeal,

    #[error("polynomial is not contained in the requested graded slice: {0}")]
    OutsideSlice(String),

    #[error("polynomial is not homogeneous")]
    Inhomogeneous,

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("not a partition: {0}")]
    NotPartition(String),

    #[error("parse error{position}: {message}")]
    Parse { position: String, message: String },

    #[error("outside the stable range: m = {m} < 2k = {}; pass the override to proceed without a uniqueness guarantee", 2 * k)]
    OutsideStableRange { m: usize, k: usize },

    #[error("subspace is not contained in the ambient space")]
    Membership,

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("internal verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, FischerError>;
