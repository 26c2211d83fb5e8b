use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid prime {0}: {1}")]
    InvalidPrime(u64, String),

    #[error("mixed coefficient rings: {0} vs {1}")]
    MixedRings(String, String),

    #[error("expected a homogeneous polynomial: {0}")]
    Inhomogeneous(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("zero pivot at ({row}, {col})")]
    ZeroPivot { row: usize, col: usize },

    #[error("degree {0} exceeds the supported cap of 8")]
    DegreeTooLarge(u32),

    #[error("free action violated: condition {condition} fails")]
    FreeActionViolation { condition: String },

    #[error("not normalizable over the coefficient field: {0}")]
    NotNormalizableOverField(String),

    #[error("no admissible sample after {attempts} attempts; last failing check: {predicate}")]
    RetryCapExceeded { predicate: String, attempts: usize },

    #[error("non-generic input at stage {stage}: {detail}")]
    NonGeneric { stage: String, detail: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
