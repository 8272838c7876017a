use thiserror::Error;

/// Errors raised by the eigensolvers and bound computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    JacobiNoConvergence { sweeps: usize, off: f64 },

    #[error("inverse iteration did not converge for eigenvalue index {index}")]
    InverseIterationNoConvergence { index: usize },

    #[error("zero gap: {0}")]
    ZeroGap(String),

    #[error("bound precondition violated: {0}")]
    InvalidBound(String),

    #[error("invalid decay factor at row {row}: denominator {denominator:e} is not positive")]
    InvalidEta { row: usize, denominator: f64 },

    #[error("gap condition fails at row {row}: |a - lambda| = {distance:e} <= {required:e}")]
    GapCondition {
        row: usize,
        distance: f64,
        required: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
