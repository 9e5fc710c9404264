use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Mathematical verdicts (not maskable, infeasible cheating) are returned as
/// values wherever the caller is expected to branch on them; variants here are
/// reserved for violated preconditions and failed numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid matrix data: {0}")]
    InvalidMatrix(String),

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("vector family is not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("inconsistent dimensions: {0}")]
    InconsistentDimensions(String),

    #[error("state does not have unit trace (trace {trace})")]
    NotUnitTrace { trace: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("observable is not maskable (eigenvalue range [{min}, {max}] excludes 1)")]
    NotMaskable { min: f64, max: f64 },

    #[error("output disk is empty: |a| = {norm} < 1")]
    EmptyDisk { norm: f64 },

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("degenerate line: {0}")]
    DegenerateLine(String),

    #[error("degenerate point set: {0}")]
    Degenerate(String),

    #[error("inconsistent constraints (residual {residual:e})")]
    Inconsistent { residual: f64 },

    #[error("points are identical within tolerance")]
    IdenticalPoints,

    #[error("no common output state (distance between sets {distance:e} after {iterations} iterations)")]
    Infeasible { distance: f64, iterations: usize },

    #[error("masking constraints have no affine solution (residual {residual:e})")]
    NoAffineSolution { residual: f64 },

    #[error("bad Schmidt spectrum: {0}")]
    BadSpectrum(String),
}

pub type Result<T> = std::result::Result<T, Error>;
