use funcspace::{FuncError, OdeError};
use stackel_core::StackelError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadialError {
    #[error("{end} end has singular strength {found}, expected {expected}")]
    AhStructure { end: &'static str, found: f64, expected: f64 },
    #[error("invalid radial parameters: {0}")]
    Parameters(String),
    #[error("singular integration failed: {0}")]
    Singular(OdeError),
    #[error("integration accuracy not met: {0}")]
    Accuracy(String),
    #[error("endpoint ladder disagrees by {diff:e} (limit {tol:e})")]
    Ladder { diff: f64, tol: f64 },
    #[error("characteristic function vanishes (|Δ| = {0:e}): pole of M")]
    Pole(f64),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Structure(#[from] StackelError),
}

impl From<OdeError> for RadialError {
    fn from(e: OdeError) -> Self {
        RadialError::Singular(e)
    }
}
