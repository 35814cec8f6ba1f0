//! Radial half of the separated problem: the singular Schrödinger operator
//! on `(0, A)` in each of its Liouville gauges, fundamental systems with
//! prescribed endpoint behaviour, the characteristic functions `Δ`, `δ`,
//! the Weyl-Titchmarsh function and the partial scattering matrices.

pub mod asymptotics;
pub mod cam;
pub mod characteristic;
pub mod energy;
pub mod error;
pub mod fss;
pub mod oracle;
pub mod potential;
pub mod scatter;

pub use asymptotics::{asymptotics_check, AsymptoticRow};
pub use cam::{cam_diagnostics, CamPoint, CamReport};
pub use characteristic::{characteristic, CharacteristicData};
pub use energy::EnergyContext;
pub use error::RadialError;
pub use fss::{solve_fss, trace_pair, wronskian, FssOptions, FundamentalSystem, PairState};
pub use potential::{build_potential, End, Gauge, RadialPotential};
pub use scatter::{scatter_mode, scattering_entry, unitarity_residual, PartialScatteringMatrix, ScatteringRecord};
