use alloc::string::String;

/// Errors raised by the numerical kernel and the lattice pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimensions must be at least 1x1")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular to working precision (pivot {pivot:e} at column {column})")]
    Singular { column: usize, pivot: f64 },
    #[error("QR iteration failed to converge after {iterations} sweeps")]
    NoConvergence { iterations: usize },
    #[error("matrix is near-defective (eigenvector condition {condition:e} > {threshold:e}); likely close to an exceptional point")]
    NearDefective { condition: f64, threshold: f64 },
    #[error("size cap exceeded: {requested} rows requested, cap is {cap}")]
    SizeCap { requested: usize, cap: usize },
    #[error("integer overflow computing {what}")]
    Overflow { what: &'static str },
    #[error("reduction transform is singular (condition {condition:e}); exceptional point or aliasing degeneracy")]
    ReductionSingular { condition: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("broken chain: zero off-diagonal entry at index {index}")]
    BrokenChain { index: usize },
    #[error("eigensolve failed at epsilon = {epsilon:e}: {message}")]
    SweepFailure { epsilon: f64, message: String },
    #[error("exponent fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = core::result::Result<T, Error>;
