use thiserror::Error;

use crate::scalar::ParseScalarError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("{labels} labels given for a {size}-point bi-function")]
    LabelCount { labels: usize, size: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("scaling vector has length {got}, expected {expected}")]
    ScaleLength { expected: usize, got: usize },
    #[error("scaling factor at index {index} vanishes")]
    VanishingScale { index: usize },
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("labels differ at index {index}: `{left}` vs `{right}`")]
    LabelMismatch { index: usize, left: String, right: String },
    #[error("index {index} out of range for {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("cardinality bound {max} exceeds {size} points")]
    InvalidCardinality { max: usize, size: usize },
    #[error("principal minor on subset {0:?} vanishes")]
    VanishingMinor(Vec<usize>),
    #[error("diagonal entry {0} vanishes")]
    Degenerate(usize),
    #[error("input is not symmetric")]
    NotSymmetric,
    #[error("corner tridiagonal input needs n >= 2 diagonal and n corner entries, got {diag} and {off}")]
    TridiagonalShape { diag: usize, off: usize },
    #[error("vectors have dimension {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("vector sets have {left} and {right} members")]
    VectorCount { left: usize, right: usize },
    #[error("vector {0} is zero")]
    ZeroVector(usize),
    #[error("kernel matrix is not real symmetric")]
    NotRealSymmetric,
    #[error("kernel matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),
    #[error("vector sets have ranks {left} and {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("face volumes agree but no isometry aligns the spans (residual {0:e})")]
    AlignmentFailed(f64),
    #[error("invalid generator parameter: {0}")]
    Generator(String),
    #[error(transparent)]
    Parse(#[from] ParseScalarError),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
