use thiserror::Error;

/// Everything that can go wrong in the laboratory.
///
/// Hypothesis violations are kept apart from verdicts: a check whose
/// preconditions fail returns [`MsrError::Hypothesis`] instead of a
/// negative report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MsrError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e}, allowed {allowed:e})")]
    NotPositive { min_eigenvalue: f64, allowed: f64 },

    #[error("matrix is not invertible (margin {margin:e})")]
    NotInvertible { margin: f64 },

    #[error("not a projection (idempotence residual {residual:e})")]
    NotProjection { residual: f64 },

    #[error("generators {first} and {second} do not commute (residual {residual:e})")]
    NonCommuting { first: usize, second: usize, residual: f64 },

    #[error("joint diagonalization did not refine after {attempts} attempts (residual {residual:e})")]
    RefinementFailed { attempts: usize, residual: f64 },

    #[error("element is not in the block (residual {residual:e})")]
    NotInBlock { residual: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("not a state: {0}")]
    NotState(String),

    #[error("unknown function tag `{0}`")]
    UnknownTag(String),
}

pub type Result<T> = std::result::Result<T, MsrError>;

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(MsrError::DimensionMismatch { left, right })
    }
}
