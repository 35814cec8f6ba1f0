//! Smooth one-dimensional coefficient functions and the calculus around them:
//! exact second-order differentiation, Liouville charts, adaptive quadrature,
//! an embedded Runge-Kutta integrator and the complex Gamma function.

pub mod chart;
pub mod error;
pub mod expr;
pub mod ode;
pub mod quad;
pub mod scalar;
pub mod smooth;
pub mod special;
pub mod spline;

pub use chart::{build_chart, build_chart_on, potential_terms_at, pushforward_potential_terms, LiouvilleChart};
pub use error::FuncError;
pub use expr::Expr;
pub use ode::{OdeError, OdeOptions};
pub use scalar::{HyperDual, Jet, Scalar};
pub use smooth::SmoothFn1D;
pub use spline::{CubicSpline, SplineTable};
