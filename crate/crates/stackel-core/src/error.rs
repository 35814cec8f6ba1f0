use funcspace::FuncError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StackelError {
    #[error("metric not riemannian at ({x1}, {x2}, {x3}): det = {det}, minors = {minors:?}")]
    NonRiemannian { x1: f64, x2: f64, x3: f64, det: f64, minors: [f64; 3] },
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    #[error("s{row}{col} changes sign on the validation grid")]
    NotStackelRiemannian { row: usize, col: usize },
    #[error("normalization failed: {0}")]
    Normalization(String),
    #[error("Robertson condition violated: residual {residual:e} at ({x1}, {x2}, {x3})")]
    RobertsonViolated { residual: f64, x1: f64, x2: f64, x3: f64 },
    #[error("angular gauge error: {0}")]
    AngularGauge(String),
    #[error("row {row} is not periodic: seam mismatch {mismatch:e}")]
    NotPeriodic { row: usize, mismatch: f64 },
    #[error("invalid matrix: {0}")]
    Invalid(String),
    #[error(transparent)]
    Func(#[from] FuncError),
}
