use core::fmt;

/// Everything that can go wrong in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two quantities that must share a dimension do not.
    DimensionMismatch { expected: usize, found: usize },
    /// A coordinate or parameter is NaN or infinite where a finite value is required.
    NonFinite,
    /// A point or box with zero axes.
    ZeroDimension,
    /// A flat coordinate buffer whose length is not a multiple of the dimension.
    RaggedCoordinates { len: usize, dim: usize },
    /// An operation that needs points got a dataset without any.
    EmptyDataset,
    /// Box bounds inverted (low > high) along some axis.
    InvalidBounds { axis: usize },
    /// A squared distance below zero.
    NegativeDistance,
    /// `k` outside the legal range for the operation.
    InvalidK { k: usize, max: usize },
    /// Epsilon must be finite and non-negative.
    InvalidEpsilon,
    /// Leaf capacity must be at least 1.
    InvalidBucketSize,
    /// A bounded distance threshold must be positive and finite.
    InvalidThreshold,
    /// Incremental box distance went negative: parent distance smaller than
    /// the offset being removed.
    NegativeBoxDistance,
    /// The index passed in was built over a different dataset.
    DatasetMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite => write!(f, "non-finite value where a finite one is required"),
            Error::ZeroDimension => write!(f, "points must have at least one coordinate"),
            Error::RaggedCoordinates { len, dim } => {
                write!(f, "{len} coordinates do not divide into dimension-{dim} points")
            }
            Error::EmptyDataset => write!(f, "dataset holds no points"),
            Error::InvalidBounds { axis } => write!(f, "box bounds inverted along axis {axis}"),
            Error::NegativeDistance => write!(f, "squared distance must be non-negative"),
            Error::InvalidK { k, max } => write!(f, "k = {k} outside 1..={max}"),
            Error::InvalidEpsilon => write!(f, "epsilon must be finite and non-negative"),
            Error::InvalidBucketSize => write!(f, "bucket size must be at least 1"),
            Error::InvalidThreshold => {
                write!(f, "distance threshold must be positive and finite")
            }
            Error::NegativeBoxDistance => {
                write!(f, "incremental box distance went negative (parent < removed offset)")
            }
            Error::DatasetMismatch => write!(f, "index was built over a different dataset"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
