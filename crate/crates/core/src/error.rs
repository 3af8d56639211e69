use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("determinant order {k} exceeds matrix size {p}")]
    DeterminantOrder { k: usize, p: usize },
    #[error("partition {0} has more than {1} parts")]
    TooManyParts(String, usize),
    #[error("profile {0} is not lower triangular")]
    NotLowerTriangular(String),
    #[error("problem size {needed} exceeds cap {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("invalid index: {0}")]
    BadIndex(String),
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("base algebra is not valid: {0}")]
    InvalidBase(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
