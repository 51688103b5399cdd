use thiserror::Error;

/// Errors produced by the solver core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix dimensions must be positive (got {rows}x{cols})")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("non-finite value in {what} at position {index}")]
    NonFinite { what: &'static str, index: usize },
    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("matrix is not symmetric: |w[{row},{col}] - w[{col},{row}]| = {gap:e}")]
    Asymmetric { row: usize, col: usize, gap: f64 },
    #[error("previous gradient has zero norm")]
    ZeroGradient,
    #[error("search direction has no usable curvature ({curvature:e})")]
    FlatDirection { curvature: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("Jacobi rotations did not converge after {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
