//! Joint spectrum of the two commuting angular operators on the torus of a
//! normalized Stäckel matrix.
//!
//! The rows 2 and 3 give periodic Sturm-Liouville equations that share the
//! separation constants `(μ², ν²)`; [`coupled_solve`] finds their common
//! eigenvalues, [`cone_bounds`] and [`count_in_cone`] give the distribution
//! diagnostics.

pub mod cone;
pub mod coupled;
pub mod curves;
pub mod error;
pub mod galerkin;
pub mod hill;
pub mod problem;

pub use cone::{cone_bounds, count_in_cone, symbol_volume, ConeBounds, ConeCount};
pub use coupled::{coupled_solve, floquet_check, CoupledEigenvalue, SolveOptions, Spectrum};
pub use curves::{curve_separation, CurveSeparation};
pub use error::AngularError;
pub use hill::{det, discriminant, monodromy_of, transfer_path, wronskian_drift, Hill, Mat2, Schrodinger};
pub use problem::{angular_schrodinger, monodromy, periodicity_char, AngularPotential, AngularProblem};
