//! Comparison of two manifolds through their scattering data: angular
//! gauge recovery, spectra and partial scattering matrices, radial
//! reconstruction and a pullback check of the metric.

pub mod angular;
pub mod error;
pub mod generators;
pub mod pipeline;
pub mod pullback;
pub mod radial;
pub mod scattering;

pub use angular::{angular_recover, AngularRecovery};
pub use error::VerifyError;
pub use pipeline::{normalize, verify, ComparisonReport, Verdict};
pub use pullback::{pullback_compare, PullbackComparison};
pub use radial::{radial_recover, RadialRecovery};
pub use scattering::{compare_scattering, pair_spectra, solve_options, ModeDeviation, ScatteringComparison};
