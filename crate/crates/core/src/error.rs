use core::fmt;

/// Errors produced by the clustering core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two vectors or matrices disagree on a dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// Not enough samples for the requested operation.
    InsufficientData { needed: usize, found: usize },
    /// A non-finite value was found at (row, col).
    NonFinite { row: usize, col: usize },
    /// All pairwise distances are zero, so the sensitivity radius would be zero.
    DegenerateRadius,
    /// A centroid received zero total weight.
    DegenerateCluster(usize),
    /// A hyperparameter or argument is outside its valid range.
    InvalidConfig(&'static str),
    /// The model holds no micro-clusters.
    EmptyModel,
    /// A cluster index does not exist in the model.
    InvalidCluster { index: usize, len: usize },
    /// The metric is undefined for the given labeling.
    UndefinedMetric(&'static str),
    /// A stream point was rejected; wraps the cause with the point's position.
    StreamPoint { index: usize, source: alloc::boxed::Box<Error> },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InsufficientData { needed, found } => {
                write!(f, "insufficient data: need at least {needed} samples, found {found}")
            }
            Error::NonFinite { row, col } => {
                write!(f, "non-finite value at row {row}, column {col}")
            }
            Error::DegenerateRadius => {
                write!(f, "degenerate radius: all points coincide")
            }
            Error::DegenerateCluster(i) => write!(f, "cluster {i} has zero total weight"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::EmptyModel => write!(f, "model has no micro-clusters"),
            Error::InvalidCluster { index, len } => {
                write!(f, "cluster index {index} out of range for {len} clusters")
            }
            Error::UndefinedMetric(msg) => write!(f, "undefined metric: {msg}"),
            Error::StreamPoint { index, source } => write!(f, "stream point {index}: {source}"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::StreamPoint { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
