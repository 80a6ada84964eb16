use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("GF({0}) is not supported: the modulus must be a prime below 256")]
    InvalidField(u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspace is not contained in the ambient space")]
    NotASubspace,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("modules are defined over different algebras")]
    AlgebraMismatch,
    #[error("module has a projective summand of rank {0}; strip it before resolving")]
    ProjectiveSummand(usize),
    #[error("degree {degree} lies outside the window [{n_min}, {n_max}]; extend the window to at least [{need_min}, {need_max}]")]
    WindowTooSmall { degree: i64, n_min: i64, n_max: i64, need_min: i64, need_max: i64 },
    #[error("lifting failed in degree {0}: the linear system is inconsistent")]
    LiftFailed(i64),
    #[error("not a cocycle in degree {0}")]
    NotACocycle(i64),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("module is decomposable: {0}")]
    Decomposable(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("cache error: {0}")]
    Cache(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
