use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate triangle: |2A| = {twice_area:e} is below tolerance {tolerance:e}")]
    DegenerateTriangle { twice_area: f64, tolerance: f64 },

    #[error("no quadrature rule of degree {0} available (supported: <= 10)")]
    UnsupportedDegree(usize),

    #[error("unsupported matrix kind `{0}`")]
    UnsupportedKind(String),

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("mesh invariant violated: {0}")]
    InvariantViolation(String),

    #[error("operator {operator} needs {expected} DOFs on its {side} side, got a {found} map")]
    KindFieldMismatch {
        operator: String,
        side: &'static str,
        expected: &'static str,
        found: &'static str,
    },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("problem size {dofs} exceeds the dense solver budget of {limit} DOFs")]
    BudgetExceeded { dofs: usize, limit: usize },
}
