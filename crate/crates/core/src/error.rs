use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Elimination broke down while the support still exceeded `d + 1`.
    #[error("Carathéodory reduction failed on support of size {} (indices {support:?})", support.len())]
    ReductionFailed { support: Vec<usize> },

    #[error("sampling failed after {attempts} attempts: best L-inf distance {best_distance:e} > delta {delta:e}")]
    SamplingFailed {
        attempts: usize,
        best_distance: f64,
        delta: f64,
    },

    #[error("size guard violated: {0}")]
    SizeGuard(String),

    #[error("protocol used {cost} bits on input ({x}, {y}) but declares {declared}")]
    CostExceeded {
        x: u32,
        y: u32,
        cost: u32,
        declared: u32,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
