use angular_spectrum::AngularError;
use funcspace::{FuncError, OdeError};
use radial_scatter::RadialError;
use stackel_core::StackelError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Structure(#[from] StackelError),
    #[error(transparent)]
    Angular(#[from] AngularError),
    #[error(transparent)]
    Radial(#[from] RadialError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error("not enough data: {0}")]
    Insufficient(String),
}
