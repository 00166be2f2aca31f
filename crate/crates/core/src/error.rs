use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("matrix must be non-empty")]
    EmptyMatrix,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("Jordan block size must be at least 1")]
    ZeroBlockSize,
    #[error("block multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("Jordan specification has no blocks")]
    EmptySpec,
    #[error("realized dimension {dim} exceeds the limit {limit}")]
    DimensionGuard { dim: usize, limit: usize },
    #[error("Choi matrix dimension {dim} exceeds the limit {limit}")]
    ChoiGuard { dim: usize, limit: usize },
    #[error("block index {index} out of range for {len} blocks")]
    BlockIndex { index: usize, len: usize },
    #[error("matricial-range membership needs at least two blocks")]
    SingleBlock,
    #[error("eigenvalue {re}{im:+}i is not real")]
    NonRealEigenvalue { re: f64, im: f64 },
    #[error("family of blocks is reducible: {0}")]
    Reducible(String),
    #[error("compression plan does not match the specification: {0}")]
    PlanMismatch(String),
    #[error("sample count {got} is below the minimum {min}")]
    TooFewSamples { got: usize, min: usize },
    #[error("invalid input: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Errors caused by the shape of the operator rather than by malformed
    /// input or numerical limits.
    pub fn is_structural(&self) -> bool {
        matches!(self, Error::Reducible(_) | Error::SingleBlock)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
