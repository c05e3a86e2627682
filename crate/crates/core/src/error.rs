//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or configuration value failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An objective returned a non-finite value during optimization.
    #[error("objective returned non-finite value at iteration {iteration} for position {position:?}")]
    NonFiniteObjective { iteration: usize, position: Vec<f64> },

    /// A colorspace identifier could not be parsed.
    #[error("unknown colorspace: {0}")]
    UnknownColorspace(String),

    /// The same colorspace was requested twice in one conversion fan-out.
    #[error("duplicate colorspace: {0}")]
    DuplicateColorspace(String),

    /// A plane is too small for residual extraction.
    #[error("plane {width}x{height} is smaller than 3x3")]
    PlaneTooSmall { width: usize, height: usize },

    #[error("not a binary PPM (P6) stream")]
    PpmMagic,

    #[error("unsupported maxval {0} (only 255 is supported)")]
    PpmMaxval(u32),

    #[error("truncated pixel data: expected {expected} bytes, found {found}")]
    PpmTruncated { expected: usize, found: usize },

    #[error("malformed PPM header: {0}")]
    PpmHeader(String),

    /// Training or fitness evaluation received rows of only one class.
    #[error("dataset contains a single class")]
    SingleClassDataset,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Rank-sum test input where every value in both samples is identical.
    #[error("degenerate samples")]
    DegenerateSamples,

    #[error("malformed model text: {0}")]
    ModelParse(String),

    #[error("malformed manifest: {0}")]
    ManifestParse(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
