use funcspace::{FuncError, OdeError};
use stackel_core::StackelError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AngularError {
    #[error("theta^2 = {theta_sq} outside the admissible window: {reason}")]
    Window { theta_sq: f64, reason: String },
    #[error("integration accuracy not met: {0}")]
    Accuracy(String),
    #[error("branches are not transversal: {0}")]
    Transversality(String),
    #[error("Fourier basis of {size} modes exhausted at branch {index}")]
    Basis { size: usize, index: usize },
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Structure(#[from] StackelError),
}
