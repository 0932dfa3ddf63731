use thiserror::Error;

/// Errors raised by every module of the toolkit.
///
/// Messages name the invariant that was violated so front ends can surface
/// them verbatim.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix shape invalid: {rows}x{cols} with {len} entries")]
    Shape { rows: usize, cols: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invariant violated: Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invariant violated: unit trace (trace = {trace})")]
    InvalidTrace { trace: f64 },

    #[error("invariant violated: positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invariant violated: unitary (max deviation of U^dag U from identity {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invariant violated: trace preserving (max deviation of sum K^dag K from identity {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("invariant violated: Bloch vector norm {norm} exceeds 1")]
    InvalidBloch { norm: f64 },

    #[error("eigensolver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("expected {expected} parameters, found {found}")]
    ParameterCount { expected: String, found: usize },

    #[error("joint dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("inconsistent moments: {0}")]
    InconsistentMoments(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
